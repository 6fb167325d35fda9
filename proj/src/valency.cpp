#include "folner/valency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "folner/errors.hpp"

namespace folner {

namespace {

std::string canonical_formula(const std::string& name) {
  if (name == "5+floor(sqrt(log(k+2)))" || name == "sqrt-log") return "5+floor(sqrt(log(k+2)))";
  if (name == "5+floor(log(log(k+3)))" || name == "log-log") return "5+floor(log(log(k+3)))";
  throw InvalidInput("unknown valency formula: " + name);
}

std::size_t eval_formula(const std::string& f, std::size_t k) {
  const double x = static_cast<double>(k);
  if (f == "5+floor(sqrt(log(k+2)))") return 5 + static_cast<std::size_t>(std::floor(std::sqrt(std::log(x + 2.0))));
  return 5 + static_cast<std::size_t>(std::floor(std::log(std::log(x + 3.0))));
}

void check_entries(const std::vector<std::size_t>& v) {
  for (auto d : v) {
    if (d < 2) throw InvalidInput("valency entries must be >= 2");
  }
}

}  // namespace

ValencySequence ValencySequence::constant(std::size_t d) { return periodic({}, {d}); }

ValencySequence ValencySequence::periodic(std::vector<std::size_t> prefix, std::vector<std::size_t> period) {
  if (period.empty()) throw InvalidInput("valency period must be nonempty");
  check_entries(prefix);
  check_entries(period);
  ValencySequence s;
  // Normalize: primitive period, then fold the prefix into the period where possible.
  const std::size_t n = period.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = period[i] == period[i - p];
    if (ok) {
      period.resize(p);
      break;
    }
  }
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    std::rotate(period.rbegin(), period.rbegin() + 1, period.rend());
  }
  s.prefix_ = std::move(prefix);
  s.period_ = std::move(period);
  return s;
}

ValencySequence ValencySequence::formula(const std::string& name) {
  ValencySequence s;
  s.formula_ = canonical_formula(name);
  return s;
}

ValencySequence ValencySequence::from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return constant(j.get<std::size_t>());
  if (!j.is_object()) throw InvalidInput("valency spec must be an object");
  if (j.contains("constant")) return constant(j.at("constant").get<std::size_t>());
  if (j.contains("formula")) return formula(j.at("formula").get<std::string>());
  if (j.contains("period")) {
    std::vector<std::size_t> prefix;
    if (j.contains("prefix")) prefix = j.at("prefix").get<std::vector<std::size_t>>();
    return periodic(std::move(prefix), j.at("period").get<std::vector<std::size_t>>());
  }
  throw InvalidInput("valency spec needs one of constant/prefix+period/formula");
}

nlohmann::json ValencySequence::to_json() const {
  if (!formula_.empty()) {
    nlohmann::json j{{"formula", formula_}};
    if (offset_ != 0) j["offset"] = offset_;
    if (scale_ != 1) j["scale"] = scale_;
    return j;
  }
  if (is_constant()) return {{"constant", period_[0]}};
  return {{"prefix", prefix_}, {"period", period_}};
}

std::size_t ValencySequence::operator()(std::size_t i) const {
  if (!formula_.empty()) return scale_ * eval_formula(formula_, i + offset_);
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

ValencySequence ValencySequence::shift(std::size_t n) const {
  if (!formula_.empty()) {
    ValencySequence s = *this;
    s.offset_ += n;
    return s;
  }
  std::vector<std::size_t> prefix;
  for (std::size_t i = n; i < prefix_.size(); ++i) prefix.push_back(prefix_[i]);
  // The period restarts where the shifted prefix ends.
  const std::size_t start = std::max(n, prefix_.size());
  std::vector<std::size_t> period(period_.size());
  for (std::size_t i = 0; i < period_.size(); ++i) period[i] = (*this)(start + i);
  return periodic(std::move(prefix), std::move(period));
}

bool ValencySequence::is_constant() const {
  return formula_.empty() && prefix_.empty() && period_.size() == 1;
}

std::size_t ValencySequence::canonical_level(std::size_t i) const {
  if (!formula_.empty()) throw InvalidInput("canonical levels need an eventually periodic sequence");
  if (i < prefix_.size()) return i;
  return prefix_.size() + (i - prefix_.size()) % period_.size();
}

ValencySequence ValencySequence::doubled() const {
  if (!formula_.empty()) {
    ValencySequence s = *this;
    s.scale_ *= 2;
    return s;
  }
  auto twice = [](std::vector<std::size_t> v) {
    for (auto& x : v) x *= 2;
    return v;
  };
  return periodic(twice(prefix_), twice(period_));
}

std::string ValencySequence::describe() const { return to_json().dump(); }

}  // namespace folner
