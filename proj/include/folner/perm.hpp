#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace folner {

/// Points of {1..d} are stored zero-based: point 0 is the distinguished point "1".
using Point = std::uint32_t;

/// All randomized routines take a caller-owned generator.
using Rng = std::mt19937_64;

enum class Parity { even, odd };

/// A bijection of {0..d-1} in one-line notation.
///
/// Products follow the left-then-right convention used throughout the
/// library: compose(p, q) applies p first, then q.
class Permutation {
 public:
  Permutation() = default;

  /// Throws InvalidInput unless `images` is a bijection of {0..size-1}.
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree);

  /// Builds a permutation from zero-based cycles, e.g. {{0, 1, 2}} for (1 2 3).
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>>& cycles);

  /// Parses "(1 2 3)(4 5)" or "e" (one-based points).
  static Permutation parse(std::string_view text, std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point t) const { return images_[t]; }
  std::span<const Point> images() const { return images_; }

  bool is_identity() const;
  Parity parity() const;
  bool is_even() const { return parity() == Parity::even; }
  Permutation inverse() const;
  Point preimage(Point t) const;

  /// Cycle notation with one-based points; the identity renders as "e".
  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<Point> images_;
};

/// (p then q): compose(p, q)(t) = q(p(t)). Throws InvalidInput on degree mismatch.
Permutation compose(const Permutation& p, const Permutation& q);

inline Permutation operator*(const Permutation& p, const Permutation& q) { return compose(p, q); }

inline Parity parity(const Permutation& p) { return p.parity(); }

/// x y x^-1 y^-1 in the left-then-right order.
Permutation commutator(const Permutation& x, const Permutation& y);

/// Uniform element of A_d, or of Fix_{A_d}(1) when fix_one is set.
/// Requires d >= 3 (d >= 4 with fix_one).
Permutation random_alternating(std::size_t d, bool fix_one, Rng& rng);

/// Uniform element of S_d (or of Fix_{S_d}(1)).
Permutation random_symmetric(std::size_t d, bool fix_one, Rng& rng);

/// sigma * sigma' on {0..2d-1}, where sigma'(t) = sigma(t - d) + d. Always even.
Permutation double_perm(const Permutation& p);

/// Every element of A_d (resp. S_d), in lexicographic one-line order. Small d only.
std::vector<Permutation> alternating_group(std::size_t d);
std::vector<Permutation> symmetric_group(std::size_t d);

/// Two-element generating set of A_n acting on {offset, ..., offset+n-1} inside S_degree.
/// Empty when A_n is trivial (n < 3).
std::vector<Permutation> alternating_generators(std::size_t degree, std::size_t offset, std::size_t n);

/// Order of p as a group element.
std::uint64_t order(const Permutation& p);

}  // namespace folner
