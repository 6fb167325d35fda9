// Command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage, 3 resource.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "folner/cli.hpp"
#include "folner/errors.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

template <class T>
void overlay(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

nlohmann::json parse_valency(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return nlohmann::json{{"formula", text}};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Folner set computations for mother groups of tree automorphisms"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::size_t> d, k, K, k_max, K_max, n_max, j, depth, exact_index, max_bits;
  std::optional<std::uint64_t> n, seed;
  std::optional<std::string> valency, stratum, profile, word, generators, expect, exec, format, output;
  std::optional<double> eta;
  bool quotient = false;

  app.add_option("--config", config_path, "JSON configuration file; flags override it");
  app.add_option("--d", d, "degree");
  app.add_option("--valency", valency, "valency spec: JSON ({\"constant\": 5}, {\"prefix\": [..], \"period\": [..]}) or a formula name");
  app.add_option("--k", k, "depth parameter");
  app.add_option("--K", K, "top index");
  app.add_option("--k-max", k_max, "largest k");
  app.add_option("--K-max", K_max, "largest K");
  app.add_option("--n", n, "sample or trial count (folfun: the n of delta_k <= 1/n)");
  app.add_option("--n-max", n_max, "folfun: tabulate n = 1..n-max");
  app.add_option("--j", j, "orbit: largest level");
  app.add_option("--depth", depth, "embed: portrait depth");
  app.add_option("--exact-index", exact_index, "last index computed with exact rationals");
  app.add_option("--max-bits", max_bits, "bit budget for exact values");
  app.add_option("--stratum", stratum, "member | interior | boundary");
  app.add_option("--eta", eta, "decay: exponent of the normalized column");
  app.add_option("--profile", profile, "member: profile JSON file");
  app.add_option("--word", word, "member: word text");
  app.add_option("--generators", generators, "member: generator table JSON file");
  app.add_option("--expect", expect, "member: expected status");
  app.add_flag("--quotient", quotient, "orbit: use the level-stabilizer quotient generators");
  app.add_option("--seed", seed, "random seed (default: $FOLNER_SEED, else 1)");
  app.add_option("--exec", exec, "serial | parallel");
  app.add_option("--format", format, "csv | json");
  app.add_option("--output", output, "output file (default stdout)");

  for (const auto& name : folner::subcommands()) {
    app.add_subcommand(name, "run " + name)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    nlohmann::json cfg = nlohmann::json::object();
    if (config_path) {
      std::ifstream in(*config_path);
      if (!in) throw folner::InvalidInput("cannot open " + *config_path);
      try {
        cfg = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw folner::InvalidInput(*config_path + ": " + e.what());
      }
    }
    cfg["command"] = app.get_subcommands().front()->get_name();
    if (!cfg.contains("seed")) {
      if (const char* env = std::getenv("FOLNER_SEED")) {
        try {
          cfg["seed"] = std::stoull(env);
        } catch (const std::exception&) {
          throw folner::InvalidInput("FOLNER_SEED is not an unsigned integer");
        }
      }
    }
    overlay(cfg, "d", d);
    if (valency) cfg["valency"] = parse_valency(*valency);
    overlay(cfg, "k", k);
    overlay(cfg, "K", K);
    overlay(cfg, "k_max", k_max);
    overlay(cfg, "K_max", K_max);
    overlay(cfg, "n", n);
    overlay(cfg, "n_max", n_max);
    overlay(cfg, "j", j);
    overlay(cfg, "depth", depth);
    overlay(cfg, "exact_index", exact_index);
    overlay(cfg, "max_bits", max_bits);
    overlay(cfg, "stratum", stratum);
    overlay(cfg, "eta", eta);
    overlay(cfg, "profile", profile);
    overlay(cfg, "word", word);
    overlay(cfg, "generators", generators);
    overlay(cfg, "expect", expect);
    if (quotient) cfg["quotient"] = true;
    overlay(cfg, "seed", seed);
    overlay(cfg, "exec", exec);
    overlay(cfg, "format", format);
    overlay(cfg, "output", output);

    const auto config = folner::RunConfig::from_json(cfg);
    const std::string fmt = config.format.value_or(folner::default_format(config.command));
    if (fmt != "csv" && fmt != "json") throw folner::InvalidInput("format must be csv or json");

    const auto report = folner::run(config);

    std::ofstream file;
    if (config.output) {
      file.open(*config.output);
      if (!file) throw folner::InvalidInput("cannot write " + *config.output);
    }
    std::ostream& out = config.output ? static_cast<std::ostream&>(file) : std::cout;
    if (fmt == "csv") {
      report.write_csv(out);
      report.write_summary(std::cerr);
    } else {
      out << report.to_json().dump(2) << "\n";
    }
    return report.pass() ? kPass : kCheckFailure;
  } catch (const folner::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const folner::InvalidInput& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const folner::Unsupported& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kUsage;
  }
}
