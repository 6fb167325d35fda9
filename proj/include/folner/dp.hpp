#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "folner/directed.hpp"
#include "folner/folner.hpp"
#include "folner/valency.hpp"

namespace folner {

/// f(D, eps) = (1 - eps^{D-1}) / (1 - eps^D), for D >= 2 and 0 < eps < 1.
mpq_class f_eval(std::size_t D, const mpq_class& eps);
double f_eval(std::size_t D, double eps);

/// eps_0^K .. eps_K^K with eps_0 = 1 - 1/d_K and eps_{k+1} = eps_k f(d_{K-k-1}, eps_k).
struct EpsilonTable {
  std::size_t K = 0;
  RatioSequence eps;

  /// D_k = d_{K-k}: the degree used at depth parameter k.
  std::vector<std::size_t> degrees;
};

EpsilonTable epsilon_sequence(const ValencySequence& valencies, std::size_t K, const ExactPolicy& policy = {});

/// Per-depth degrees (d_{K-k}, ..., d_K) of the tree behind L_k^K.
std::vector<std::size_t> tree_degrees(const ValencySequence& valencies, std::size_t K, std::size_t k);

/// interior / member over every direction assignment on the L_k^K tree.
mpq_class mixed_brute_force_ratio(const ValencySequence& valencies, std::size_t K, std::size_t k,
                                  Exec exec = Exec::parallel);

struct DecayRow {
  std::size_t K = 0;
  std::size_t d_K = 0;
  double eps = 0;
  std::optional<mpq_class> exact;
  std::optional<double> normalized;  // eps * K^eta
};

struct DecayOptions {
  std::optional<double> eta;
  ExactPolicy policy = ExactPolicy::floats_only();
  Exec exec = Exec::parallel;
};

/// Rows K = 0..K_max of eps_K^K.
std::vector<DecayRow> decay_report(const ValencySequence& valencies, std::size_t K_max, const DecayOptions& opts = {});

/// Last K at which d_K differs from d_{K-1} (0 if none): eps_K^K is strictly decreasing past it
/// as long as the valency stays put.
std::size_t plateau_end(const std::vector<DecayRow>& rows);

/// Group data of a DP sequence at one level: A_i = Alt(d_i) acting on the root,
/// and B_i generated by the level-i views of the directed generators.
struct DPInstance {
  ValencySequence valencies;
  std::vector<DirectedSpec> directed;
  std::size_t level = 0;  // number of shifts applied so far

  /// Mother-group diagonal instance in G_d (constant directed data).
  static DPInstance mother(std::size_t d, const std::vector<BElement>& generators);

  void validate() const;
  nlohmann::json to_json() const;
  static DPInstance from_json(const nlohmann::json& j);

  friend bool operator==(const DPInstance&, const DPInstance&) = default;
};

/// Drops level 0: valencies and every directed generator move up by one.
DPInstance shift_instance(const DPInstance& inst);

struct RelationCheck {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::string> first;  // a violating word, in generator indices
};

/// Samples words over the B_0 generators that are trivial in H_0 (conjugated powers u^{ord(u)})
/// and checks that the same words over the shifted generators are trivial in H_1.
RelationCheck check_shift_relations(const DPInstance& inst, std::size_t samples, std::size_t word_length,
                                    std::uint64_t seed);

/// Counts for the finite core Omega.
struct OmegaCore {
  mpz_class size = 1;
  mpz_class interior_size = 1;

  void validate() const;
};

/// (1 - eps_K^K) |Int(Omega)| / |Omega|.
mpq_class omega_ratio(const OmegaCore& core, const mpq_class& eps_K_K);

}  // namespace folner
