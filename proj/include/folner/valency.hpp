#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace folner {

/// A valency sequence (d_i)_{i>=0}, every entry >= 2.
///
/// Either eventually periodic (prefix followed by a repeating period) or one
/// of a fixed list of builtin formulas:
///   "5+floor(sqrt(log(k+2)))"   (alias "sqrt-log")
///   "5+floor(log(log(k+3)))"    (alias "log-log")
/// where log is the natural logarithm.
class ValencySequence {
 public:
  static ValencySequence constant(std::size_t d);
  static ValencySequence periodic(std::vector<std::size_t> prefix, std::vector<std::size_t> period);
  static ValencySequence formula(const std::string& name);

  /// {"constant": d} | {"prefix": [...], "period": [...]} | {"formula": "..."}.
  static ValencySequence from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::size_t operator()(std::size_t i) const;
  ValencySequence shift(std::size_t n = 1) const;

  bool eventually_periodic() const { return formula_.empty(); }
  bool is_constant() const;
  const std::vector<std::size_t>& prefix() const { return prefix_; }
  const std::vector<std::size_t>& period() const { return period_; }

  /// Representative of level i among the finitely many distinct suffixes.
  /// Only defined for eventually periodic sequences.
  std::size_t canonical_level(std::size_t i) const;

  /// The sequence (2 d_i)_i.
  ValencySequence doubled() const;

  std::string describe() const;

  friend bool operator==(const ValencySequence&, const ValencySequence&) = default;

 private:
  std::vector<std::size_t> prefix_;
  std::vector<std::size_t> period_;
  std::string formula_;
  std::size_t offset_ = 0;
  std::size_t scale_ = 1;
};

}  // namespace folner
