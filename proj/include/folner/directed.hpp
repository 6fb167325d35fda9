#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "folner/perm.hpp"
#include "folner/valency.hpp"

namespace folner {

/// One level of directed data, (a_2, ..., a_d) rho: an element of
/// AT(d, d') = A_{d'} wr A_{d-1}.
///
/// `a[t - 1]` is the label for child t (zero-based t in 1..d-1); every a has
/// degree d' and rho has degree d with rho(0) = 0. For the mother group
/// d = d' and this is the finite group B via b(a_2, ..., a_d, rho).
struct BElement {
  std::vector<Permutation> a;
  Permutation rho;

  static BElement identity(std::size_t d, std::size_t child_degree);
  static BElement identity(std::size_t d) { return identity(d, d); }

  std::size_t degree() const { return rho.degree(); }
  std::size_t child_degree() const;

  /// Label a_t for zero-based child t >= 1.
  const Permutation& at(Point t) const { return a[t - 1]; }

  bool is_identity() const;
  /// Shape, rho(0) = 0, and (when `alternate`) every permutation even.
  bool is_valid(bool alternate = true) const;
  void validate(bool alternate = true) const;

  std::string to_string() const;
  nlohmann::json to_json() const;
  static BElement from_json(const nlohmann::json& j, std::size_t d, std::size_t child_degree);

  friend bool operator==(const BElement&, const BElement&) = default;
  friend auto operator<=>(const BElement& x, const BElement& y) {
    if (auto c = x.rho <=> y.rho; c != 0) return c;
    return x.a <=> y.a;
  }
};

/// The semidirect-product law: b(a; rho) b(a'; rho') = b(a_t a'_{rho(t)}; rho rho').
BElement b_product(const BElement& x, const BElement& y);
BElement b_inverse(const BElement& x);

/// Uniform element of AT(d, d') (alternating labels), or of the symmetric
/// analogue S_{d'} wr S_{d-1} when `alternate` is false.
BElement random_belement(std::size_t d, std::size_t child_degree, Rng& rng, bool alternate = true);

std::uint64_t order(const BElement& x);

/// A directed automorphism h = (h_i)_{i>=0}, h_i in AT(d_i, d_{i+1}), described
/// by an eventually periodic list of level data.
class DirectedSpec {
 public:
  DirectedSpec() = default;
  DirectedSpec(std::vector<BElement> prefix, std::vector<BElement> period);

  /// The constant sequence (x, x, ...): for d' = d this is b(a_2, ..., a_d, rho) in G_d.
  static DirectedSpec constant(BElement x);

  const std::vector<BElement>& prefix() const { return prefix_; }
  const std::vector<BElement>& period() const { return period_; }

  const BElement& level(std::size_t i) const;
  DirectedSpec shift() const;
  bool is_identity() const;

  /// Checks each level against the valency sequence, starting at `start_level`.
  void validate(const ValencySequence& valencies, std::size_t start_level, bool alternate) const;

  nlohmann::json to_json() const;
  static DirectedSpec from_json(const nlohmann::json& j, const ValencySequence& valencies,
                                std::size_t start_level = 0);

  friend bool operator==(const DirectedSpec&, const DirectedSpec&) = default;
  friend auto operator<=>(const DirectedSpec& x, const DirectedSpec& y) {
    if (auto c = x.prefix_ <=> y.prefix_; c != 0) return c;
    return x.period_ <=> y.period_;
  }

 private:
  void normalize();

  std::vector<BElement> prefix_;
  std::vector<BElement> period_;
};

/// Levelwise product in H_dbar (the group law of prod_i AT_i).
DirectedSpec directed_product(const DirectedSpec& x, const DirectedSpec& y);
DirectedSpec directed_inverse(const DirectedSpec& x);
std::uint64_t order(const DirectedSpec& x);

/// Uniform random directed element with the given prefix/period lengths.
DirectedSpec random_directed(const ValencySequence& valencies, std::size_t prefix_len,
                             std::size_t period_len, Rng& rng, bool alternate = true);

}  // namespace folner
