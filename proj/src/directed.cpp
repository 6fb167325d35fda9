#include "folner/directed.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "folner/errors.hpp"

namespace folner {

BElement BElement::identity(std::size_t d, std::size_t child_degree) {
  BElement b;
  b.rho = Permutation::identity(d);
  b.a.assign(d - 1, Permutation::identity(child_degree));
  return b;
}

std::size_t BElement::child_degree() const {
  if (a.empty()) throw InvalidInput("BElement without child labels");
  return a.front().degree();
}

bool BElement::is_identity() const {
  if (!rho.is_identity()) return false;
  for (const auto& p : a) {
    if (!p.is_identity()) return false;
  }
  return true;
}

bool BElement::is_valid(bool alternate) const {
  const std::size_t d = rho.degree();
  if (d < 2 || a.size() != d - 1 || rho(0) != 0) return false;
  const std::size_t dc = a.front().degree();
  for (const auto& p : a) {
    if (p.degree() != dc || (alternate && !p.is_even())) return false;
  }
  return !alternate || rho.is_even();
}

void BElement::validate(bool alternate) const {
  if (!is_valid(alternate)) {
    throw InvalidInput("invalid directed level data " + to_string() +
                       (alternate ? " (need rho(1)=1, even labels)" : " (need rho(1)=1)"));
  }
}

std::string BElement::to_string() const {
  std::ostringstream out;
  out << "b(";
  for (const auto& p : a) out << p.to_string() << ", ";
  out << rho.to_string() << ')';
  return out.str();
}

nlohmann::json BElement::to_json() const {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& p : a) labels.push_back(p.to_string());
  return {{"a", labels}, {"rho", rho.to_string()}};
}

BElement BElement::from_json(const nlohmann::json& j, std::size_t d, std::size_t child_degree) {
  BElement b;
  b.rho = Permutation::parse(j.at("rho").get<std::string>(), d);
  const auto& labels = j.at("a");
  if (labels.size() != d - 1) throw InvalidInput("directed level data needs d-1 labels");
  for (const auto& s : labels) b.a.push_back(Permutation::parse(s.get<std::string>(), child_degree));
  return b;
}

BElement b_product(const BElement& x, const BElement& y) {
  if (x.degree() != y.degree() || x.a.size() != y.a.size()) throw InvalidInput("BElement shape mismatch");
  BElement z;
  z.a.reserve(x.a.size());
  for (Point t = 1; t < x.degree(); ++t) z.a.push_back(compose(x.at(t), y.at(x.rho(t))));
  z.rho = compose(x.rho, y.rho);
  return z;
}

BElement b_inverse(const BElement& x) {
  BElement z;
  const Permutation rho_inv = x.rho.inverse();
  z.a.reserve(x.a.size());
  for (Point s = 1; s < x.degree(); ++s) z.a.push_back(x.at(rho_inv(s)).inverse());
  z.rho = rho_inv;
  return z;
}

BElement random_belement(std::size_t d, std::size_t child_degree, Rng& rng, bool alternate) {
  BElement b;
  for (std::size_t t = 1; t < d; ++t) {
    if (alternate) {
      b.a.push_back(child_degree >= 3 ? random_alternating(child_degree, false, rng)
                                      : Permutation::identity(child_degree));
    } else {
      b.a.push_back(random_symmetric(child_degree, false, rng));
    }
  }
  if (alternate) {
    b.rho = d >= 4 ? random_alternating(d, true, rng) : Permutation::identity(d);
  } else {
    b.rho = random_symmetric(d, true, rng);
  }
  return b;
}

std::uint64_t order(const BElement& x) {
  BElement power = x;
  std::uint64_t n = 1;
  while (!power.is_identity()) {
    power = b_product(power, x);
    ++n;
  }
  return n;
}

DirectedSpec::DirectedSpec(std::vector<BElement> prefix, std::vector<BElement> period)
    : prefix_(std::move(prefix)), period_(std::move(period)) {
  if (period_.empty()) throw InvalidInput("directed spec needs a nonempty period");
  normalize();
}

DirectedSpec DirectedSpec::constant(BElement x) { return DirectedSpec({}, {std::move(x)}); }

void DirectedSpec::normalize() {
  const std::size_t n = period_.size();
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = period_[i] == period_[i - p];
    if (ok) {
      period_.resize(p);
      break;
    }
  }
  while (!prefix_.empty() && prefix_.back() == period_.back()) {
    prefix_.pop_back();
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
  }
}

const BElement& DirectedSpec::level(std::size_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  return period_[(i - prefix_.size()) % period_.size()];
}

DirectedSpec DirectedSpec::shift() const {
  if (!prefix_.empty()) {
    return DirectedSpec(std::vector<BElement>(prefix_.begin() + 1, prefix_.end()), period_);
  }
  std::vector<BElement> period(period_.begin() + 1, period_.end());
  period.push_back(period_.front());
  return DirectedSpec({}, std::move(period));
}

bool DirectedSpec::is_identity() const {
  for (const auto& x : prefix_) {
    if (!x.is_identity()) return false;
  }
  for (const auto& x : period_) {
    if (!x.is_identity()) return false;
  }
  return true;
}

void DirectedSpec::validate(const ValencySequence& valencies, std::size_t start_level, bool alternate) const {
  if (!valencies.eventually_periodic()) throw InvalidInput("directed data needs an eventually periodic valency");
  const std::size_t span = std::max(prefix_.size(), valencies.prefix().size() + start_level) +
                           std::lcm(period_.size(), valencies.period().size());
  for (std::size_t i = 0; i < span; ++i) {
    const BElement& x = level(i);
    x.validate(alternate);
    if (x.degree() != valencies(start_level + i) || x.child_degree() != valencies(start_level + i + 1)) {
      throw InvalidInput("directed level data does not match valency at level " + std::to_string(start_level + i));
    }
  }
}

nlohmann::json DirectedSpec::to_json() const {
  nlohmann::json pre = nlohmann::json::array();
  nlohmann::json per = nlohmann::json::array();
  for (const auto& x : prefix_) pre.push_back(x.to_json());
  for (const auto& x : period_) per.push_back(x.to_json());
  return {{"prefix", pre}, {"period", per}};
}

DirectedSpec DirectedSpec::from_json(const nlohmann::json& j, const ValencySequence& valencies,
                                     std::size_t start_level) {
  std::vector<BElement> prefix;
  std::vector<BElement> period;
  std::size_t level = start_level;
  if (j.contains("prefix")) {
    for (const auto& x : j.at("prefix")) {
      prefix.push_back(BElement::from_json(x, valencies(level), valencies(level + 1)));
      ++level;
    }
  }
  for (const auto& x : j.at("period")) {
    period.push_back(BElement::from_json(x, valencies(level), valencies(level + 1)));
    ++level;
  }
  return DirectedSpec(std::move(prefix), std::move(period));
}

namespace {

template <typename F>
DirectedSpec levelwise(const DirectedSpec& x, const DirectedSpec& y, F&& f) {
  const std::size_t pre = std::max(x.prefix().size(), y.prefix().size());
  const std::size_t per = std::lcm(x.period().size(), y.period().size());
  std::vector<BElement> prefix;
  std::vector<BElement> period;
  for (std::size_t i = 0; i < pre; ++i) prefix.push_back(f(x.level(i), y.level(i)));
  for (std::size_t i = pre; i < pre + per; ++i) period.push_back(f(x.level(i), y.level(i)));
  return DirectedSpec(std::move(prefix), std::move(period));
}

}  // namespace

DirectedSpec directed_product(const DirectedSpec& x, const DirectedSpec& y) {
  return levelwise(x, y, [](const BElement& u, const BElement& v) { return b_product(u, v); });
}

DirectedSpec directed_inverse(const DirectedSpec& x) {
  return levelwise(x, x, [](const BElement& u, const BElement&) { return b_inverse(u); });
}

std::uint64_t order(const DirectedSpec& x) {
  std::uint64_t n = 1;
  for (const auto& b : x.prefix()) n = std::lcm(n, order(b));
  for (const auto& b : x.period()) n = std::lcm(n, order(b));
  return n;
}

DirectedSpec random_directed(const ValencySequence& valencies, std::size_t prefix_len,
                             std::size_t period_len, Rng& rng, bool alternate) {
  if (!valencies.eventually_periodic()) throw InvalidInput("directed data needs an eventually periodic valency");
  prefix_len = std::max(prefix_len, valencies.prefix().size());
  const std::size_t vp = valencies.period().size();
  period_len = std::max<std::size_t>(1, (period_len + vp - 1) / vp) * vp;
  std::vector<BElement> prefix;
  std::vector<BElement> period;
  for (std::size_t i = 0; i < prefix_len; ++i) {
    prefix.push_back(random_belement(valencies(i), valencies(i + 1), rng, alternate));
  }
  for (std::size_t i = prefix_len; i < prefix_len + period_len; ++i) {
    period.push_back(random_belement(valencies(i), valencies(i + 1), rng, alternate));
  }
  return DirectedSpec(std::move(prefix), std::move(period));
}

}  // namespace folner
