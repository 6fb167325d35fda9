#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "folner/directed.hpp"
#include "folner/perm.hpp"
#include "folner/valency.hpp"
#include "folner/words.hpp"

namespace folner {

/// Rooted generator a(sigma); sigma must be even.
GroupWord make_generator(Alphabet& alphabet, const Permutation& sigma, std::size_t level = 0);
/// Directed generator; every payload even and every rho fixing 1.
GroupWord make_generator(Alphabet& alphabet, const DirectedSpec& spec, std::size_t level = 0);

/// The element b(a_2, ..., a_d, rho) of G_d as a one-letter word.
GroupWord b_word(Alphabet& alphabet, const BElement& b);

/// b(alpha, e, ..., e; e) and b(e, ..., e; rho).
BElement b_two(const Permutation& alpha);
BElement b_empty(const Permutation& rho);

/// Pairs (x_i, y_i) in A_d with [x_1, y_1] ... [x_n, y_n] = p. Needs d >= 5.
std::vector<std::pair<Permutation, Permutation>> commutator_expression(const Permutation& p);

/// Product of the commutators, folded left to right.
Permutation evaluate_commutators(const std::vector<std::pair<Permutation, Permutation>>& pairs,
                                 std::size_t degree);

/// Builds words w in G_d with decompose(w) = (target, e, ..., e) and trivial root.
///
/// The construction is a homomorphism on B and on A, so words over A and B
/// can be pushed through letter by letter (see image()).
class Perfect1Witness {
 public:
  /// Needs an alphabet over the constant valency d >= 5.
  explicit Perfect1Witness(Alphabet& alphabet);

  std::size_t degree() const { return d_; }
  Alphabet& alphabet() { return alphabet_; }

  GroupWord of(const BElement& target);
  GroupWord of(const Permutation& target);

  /// b_empty(rho) a(rho^-1).
  GroupWord of_b_empty(const Permutation& rho);
  /// [b_two(x), tau b_two(y) tau^-1], whose slot-1 section is b_two([x, y]).
  GroupWord of_b_commutator(const Permutation& x, const Permutation& y);

  /// Letterwise image of a word over constant directed and rooted letters.
  GroupWord image(const GroupWord& w);

  /// A word with section h at zero-based slot t, identity elsewhere, trivial root.
  GroupWord embed(Point slot, const GroupWord& h);

  const Permutation& tau() const { return tau_; }

 private:
  Alphabet& alphabet_;
  std::size_t d_;
  Permutation tau_;        // even, tau(0) = 0, tau(2) = 1
  Permutation tau_prime_;  // even, tau'(0) = 1
  std::map<Permutation, GroupWord> b_two_cache_;
  std::map<Permutation, GroupWord> rooted_cache_;
  std::map<BElement, GroupWord> b_cache_;
  std::recursive_mutex mutex_;
};

/// Free-function form of Perfect1Witness::of. Throws Unsupported when d < 5.
GroupWord perfect1_witness(Alphabet& alphabet, const BElement& target);
GroupWord perfect1_witness(Alphabet& alphabet, const Permutation& target);

/// Portrait over T_{2 dbar}: double_perm of the source labels on T_dbar, identity elsewhere.
Portrait double_embed(Alphabet& alphabet, const GroupWord& w, std::size_t depth);

/// One level type: AT(d, d') with the marked data of every input generator at that level.
struct SaturationClass {
  std::size_t degree = 0;
  std::size_t child_degree = 0;
  std::vector<BElement> marked;

  friend bool operator==(const SaturationClass&, const SaturationClass&) = default;
};

struct SaturationData {
  ValencySequence valencies;
  std::vector<SaturationClass> classes;  // the index set J
  std::vector<std::size_t> level_class;  // class of level i, i < prefix_length + period_length
  std::size_t prefix_length = 0;
  std::size_t period_length = 1;

  std::size_t class_of(std::size_t level) const;
  /// |prod_s AT(s)| = prod_s |A_{d'}|^{d-1} |A_{d-1}|.
  mpz_class closure_order() const;
  /// Whether h lies in the saturated group (alternate and constant on each class).
  bool contains(const DirectedSpec& h) const;
  /// Directed generators of the saturated group, one AT(s) generating set per class.
  std::vector<DirectedSpec> closure_generators() const;
};

/// Fails with InvalidInput for formula (non eventually periodic) valencies.
SaturationData saturated_closure(const ValencySequence& valencies, const std::vector<DirectedSpec>& gens);

/// Level-j permutations of the generating set of G_d: every a(sigma), sigma in A_d,
/// every b_two(alpha) and every b_empty(rho).
std::vector<Permutation> generator_level_permutations(std::size_t d, std::size_t j,
                                                      std::size_t max_points = std::size_t{1} << 20);

/// Same set for the quotient G_d / St_j, which needs d >= 6.
std::vector<Permutation> stabilizer_quotient_generators(std::size_t d, std::size_t j,
                                                        std::size_t max_points = std::size_t{1} << 20);

/// An element tau of the group generated by `gens` with tau(0) = 0 and tau^-1(1) not in {0, 1}.
/// Searches the generators, then products of two generators.
std::optional<Permutation> find_tau(const std::vector<Permutation>& gens);

/// Orbit of `start` under the group generated by `gens`, in BFS order.
std::vector<Point> orbit(const std::vector<Permutation>& gens, Point start);

/// Reads {"valency": ..., "rooted": {name: cycles}, "directed": {name: {"prefix": [...], "period": [...]}}}
/// and defines the named generators in `alphabet`.
void load_generator_table(Alphabet& alphabet, const nlohmann::json& table);

}  // namespace folner
