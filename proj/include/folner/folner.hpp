#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "folner/directed.hpp"
#include "folner/mother.hpp"
#include "folner/perm.hpp"
#include "folner/words.hpp"

namespace folner {

/// Where exact rationals stop and doubles take over: exact while the index is
/// at most `exact_index` and numerator and denominator fit in `max_bits`.
struct ExactPolicy {
  std::size_t exact_index = 64;
  std::size_t max_bits = std::size_t{1} << 20;

  bool admits(std::size_t k, const mpq_class& q) const;
  static ExactPolicy floats_only() { return {0, 0}; }
};

/// Nearest double to q (GMP's get_d truncates).
double to_double(const mpq_class& q);

/// x f(D, x) = x (1 - x^{D-1}) / (1 - x^D): one step of the boundary-ratio recursion in doubles.
double ratio_step(double x, std::size_t D);

/// A sequence of ratios: an exact prefix followed by doubles.
struct RatioSequence {
  std::vector<mpq_class> exact;
  std::vector<double> values;  // every term, including the exact ones

  std::size_t size() const { return values.size(); }
  bool is_exact(std::size_t k) const { return k < exact.size(); }
};

/// delta_0 = 1 - 1/d, 1 - delta_{k+1} = (1 - delta_k) / (1 - delta_k^d), for k = 0..k_max.
RatioSequence delta_sequence(std::size_t d, std::size_t k_max, const ExactPolicy& policy = {});

/// |Int(L_k)| and |boundary L_k|.
struct CountPair {
  mpz_class interior;
  mpz_class boundary;
  mpz_class total() const { return interior + boundary; }
};

/// Exact cardinalities of L_0..L_{k_max} in G_d, d >= 3. ResourceLimit past `max_bits`.
std::vector<CountPair> cardinalities(std::size_t d, std::size_t k_max, std::size_t max_bits = std::size_t{1} << 24);

/// |B|^{d^k} |A|^{(d-1) d^k + d^k + ... + 1}: an upper bound on |L_k|.
mpz_class cardinality_upper_bound(std::size_t d, std::size_t k);

struct FolnerBound {
  std::size_t k_star = 0;
  std::optional<double> log2log2_size;  // log2 log2 |L_{k*}| (d >= 3)
  std::optional<mpz_class> size;        // |L_{k*}| when it fits the bit budget
};

/// Smallest k with delta_k <= 1/n, with the size of L_k.
FolnerBound folner_function_bound(std::size_t d, std::size_t n, std::size_t max_bits = std::size_t{1} << 24,
                                  std::size_t max_steps = 100'000'000);

// ---------------------------------------------------------------------------
// Direction values and open vertices.

/// Direction values u_v = sigma_v^{-1}(1) on the internal vertices (depth 0..k) of a tree with
/// per-depth degrees. u[j] lists depth-j vertices lexicographically.
struct DirectionTree {
  std::vector<std::size_t> degrees;  // degrees[j] for depth j = 0..k
  std::vector<std::vector<Point>> u;

  std::size_t k() const { return degrees.size() - 1; }
};

struct OpenAnalysis {
  std::vector<std::vector<std::uint64_t>> open_sets;  // I(v) as a bit mask of open children
  std::vector<std::vector<bool>> open;
  bool member = false;
  bool interior = false;
};

/// Degrees must be at most 64.
OpenAnalysis analyze(const DirectionTree& tree);

// ---------------------------------------------------------------------------

/// An element of L_k in G_d, described by its labels (internal sigma_v, B leaves at child 1,
/// A leaves at children 2..d of every depth-k vertex).
class FolnerProfile {
 public:
  FolnerProfile(std::size_t d, std::size_t k, std::vector<std::vector<Permutation>> internal,
                std::vector<BElement> b_leaves, std::vector<Permutation> a_leaves);

  std::size_t degree() const { return d_; }
  std::size_t k() const { return k_; }

  const Permutation& sigma(std::size_t depth, std::size_t index) const { return internal_[depth][index]; }
  Permutation& sigma(std::size_t depth, std::size_t index) { return internal_[depth][index]; }
  const std::vector<std::vector<Permutation>>& internal() const { return internal_; }
  /// The B label below depth-k vertex v.
  const BElement& b_leaf(std::size_t v) const { return b_leaves_[v]; }
  BElement& b_leaf(std::size_t v) { return b_leaves_[v]; }
  /// The A label at child t >= 1 (zero-based) of depth-k vertex v.
  const Permutation& a_leaf(std::size_t v, Point t) const { return a_leaves_[v * (d_ - 1) + t - 1]; }
  Permutation& a_leaf(std::size_t v, Point t) { return a_leaves_[v * (d_ - 1) + t - 1]; }

  DirectionTree directions() const;
  OpenAnalysis analysis() const { return analyze(directions()); }

  nlohmann::json to_json() const;
  static FolnerProfile from_json(const nlohmann::json& j, std::size_t d);

  friend bool operator==(const FolnerProfile&, const FolnerProfile&) = default;

 private:
  std::size_t d_;
  std::size_t k_;
  std::vector<std::vector<Permutation>> internal_;
  std::vector<BElement> b_leaves_;
  std::vector<Permutation> a_leaves_;
};

bool is_member(const FolnerProfile& p);
/// InvalidInput for non-members.
bool is_interior(const FolnerProfile& p);
/// The address tau_0 ... tau_k with g(tau_0 ... tau_k) = 1 ... 1 (zero-based), following u_v.
std::vector<Point> spine(const FolnerProfile& p);

/// g s for a rooted generator a(pi) or a directed b; nullopt when the product leaves L_k.
std::optional<FolnerProfile> profile_mul_generator(const FolnerProfile& p, const Permutation& pi);
std::optional<FolnerProfile> profile_mul_generator(const FolnerProfile& p, const BElement& b);

/// Reads a word back into a profile. nullopt when the element is not in L_k.
std::optional<FolnerProfile> recognize_word(Alphabet& alphabet, const GroupWord& w, std::size_t k);

/// A word for the profile's element, assembled from perfect1 witnesses (grows fast with k).
GroupWord profile_word(Perfect1Witness& witness, const FolnerProfile& p);

// ---------------------------------------------------------------------------

enum class Stratum { member, interior, boundary };
Stratum parse_stratum(const std::string& s);
std::string to_string(Stratum s);

enum class Exec { serial, parallel };

/// Exactly uniform sampler over L_k, Int(L_k) or the boundary, for d >= 3.
class ProfileSampler {
 public:
  ProfileSampler(std::size_t d, std::size_t k_max);

  std::size_t degree() const { return d_; }
  FolnerProfile sample(std::size_t k, Stratum stratum, Rng& rng) const;

 private:
  void sample_subtree(std::size_t j, Stratum stratum, Rng& rng, std::size_t depth, std::size_t index,
                      std::vector<std::vector<Permutation>>& internal, std::vector<BElement>& b_leaves,
                      std::vector<Permutation>& a_leaves, std::size_t k) const;
  Permutation draw_sigma(Stratum stratum, std::uint64_t open_mask, Rng& rng) const;

  std::size_t d_;
  // weights_[j][stratum][i]: weight of i interior children below a vertex with j levels of children
  std::vector<std::array<std::vector<long double>, 3>> weights_;
};

/// One generator per (seed, stream).
Rng stream_rng(std::uint64_t seed, std::uint64_t stream);

struct SampleTally {
  std::uint64_t samples = 0;
  std::uint64_t members = 0;
  std::uint64_t interior = 0;
  friend bool operator==(const SampleTally&, const SampleTally&) = default;
};

/// Samples n profiles (sample i uses stream i) and counts membership and interior status.
SampleTally sample_tally(const ProfileSampler& sampler, std::size_t k, Stratum stratum, std::uint64_t n,
                         std::uint64_t seed, Exec exec = Exec::parallel);

struct LemmaViolation {
  std::uint64_t trial = 0;
  std::string property;
  nlohmann::json witness;
};

struct LemmaReport {
  std::uint64_t trials = 0;
  std::uint64_t interior_trials = 0;
  std::uint64_t violations = 0;
  std::optional<LemmaViolation> first;  // lowest trial index that failed
};

/// For sampled g in L_k, a in A, b in B \ {e}: ga is a member, gb member iff g interior,
/// g interior implies gb interior.
LemmaReport lemma_suite(const ProfileSampler& sampler, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                        Exec exec = Exec::parallel);

struct OracleCounts {
  std::uint64_t assignments = 0;
  std::uint64_t members = 0;
  std::uint64_t interior = 0;
  friend bool operator==(const OracleCounts&, const OracleCounts&) = default;
};

/// Enumerates every direction assignment on a tree with the given per-depth degrees (depth 0..k).
OracleCounts brute_force_counts(const std::vector<std::size_t>& degrees, Exec exec = Exec::parallel,
                                std::uint64_t max_assignments = std::uint64_t{1} << 26);

/// interior / member over all assignments; constant degree d, depth parameter k.
mpq_class brute_force_ratio(std::size_t d, std::size_t k, Exec exec = Exec::parallel);
mpq_class brute_force_ratio(const std::vector<std::size_t>& degrees, Exec exec = Exec::parallel);

}  // namespace folner
