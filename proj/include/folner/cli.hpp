#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace folner {

using ojson = nlohmann::ordered_json;

/// Every setting of a run. Keys in the JSON form match the long flag names with
/// dashes replaced by underscores.
struct RunConfig {
  std::string command;
  std::optional<std::size_t> d;
  std::optional<nlohmann::json> valency;
  std::optional<std::size_t> k;
  std::optional<std::size_t> K;
  std::optional<std::size_t> k_max;
  std::optional<std::size_t> K_max;
  std::optional<std::uint64_t> n;
  std::optional<std::size_t> n_max;
  std::optional<std::size_t> j;
  std::optional<std::size_t> depth;
  std::optional<std::size_t> exact_index;
  std::optional<std::size_t> max_bits;
  std::optional<std::string> stratum;
  std::optional<double> eta;
  std::optional<std::string> profile;     // path to a profile JSON file
  std::optional<std::string> word;        // word text
  std::optional<std::string> generators;  // path to a generator table
  std::optional<std::string> expect;      // member | interior | boundary | outside
  bool quotient = false;
  std::uint64_t seed = 1;
  std::string exec = "parallel";
  std::optional<std::string> format;  // csv | json; default depends on the command
  std::optional<std::string> output;

  static RunConfig from_json(const nlohmann::json& j);
  ojson to_json() const;
};

const std::vector<std::string>& subcommands();

struct Check {
  std::string name;
  bool pass = true;
  std::string detail;
  std::optional<ojson> witness;
};

struct Report {
  ojson metadata;
  std::vector<std::string> columns;           // row keys in output order
  std::vector<std::string> rational_columns;  // "num/den" strings, split in CSV
  std::vector<ojson> rows;
  std::vector<Check> checks;

  bool pass() const;
  ojson to_json() const;
  void write_csv(std::ostream& out) const;
  /// One line per check: "PASS name: detail" or "FAIL ...".
  void write_summary(std::ostream& out) const;
};

/// Runs one subcommand. Throws InvalidInput / Unsupported for bad configs and ResourceLimit
/// when a bound is exceeded.
Report run(const RunConfig& config);

/// Default output format for a command.
std::string default_format(const std::string& command);

}  // namespace folner
