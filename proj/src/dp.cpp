#include "folner/dp.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <omp.h>

#include "folner/errors.hpp"
#include "folner/words.hpp"

namespace folner {

namespace {

mpq_class power(const mpq_class& x, std::size_t e) {
  mpq_class out;
  mpz_pow_ui(out.get_num_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), x.get_den_mpz_t(), e);
  return out;
}

void check_domain(std::size_t D, bool inside) {
  if (D < 2) throw InvalidInput("f(D, eps) needs D >= 2");
  if (!inside) throw InvalidInput("f(D, eps) needs 0 < eps < 1");
}

// eps * f(D, eps) for eps = n/m: (T - m^{D-1}) / T with T = sum_i m^i n^{D-1-i}, in lowest terms.
mpq_class exact_step(const mpq_class& eps, std::size_t D) {
  const mpz_class& n = eps.get_num();
  const mpz_class& m = eps.get_den();
  mpz_class t = 1, mp = 1;
  for (std::size_t j = 1; j < D; ++j) {
    mp *= m;
    t = t * n + mp;
  }
  mpq_class out;
  out.get_num() = t - mp;
  out.get_den() = std::move(t);
  return out;
}

}  // namespace

mpq_class f_eval(std::size_t D, const mpq_class& eps) {
  check_domain(D, eps > 0 && eps < 1);
  const mpq_class p = power(eps, D - 1);
  return mpq_class((1 - p) / (1 - p * eps));
}

double f_eval(std::size_t D, double eps) {
  check_domain(D, eps > 0 && eps < 1);
  return ratio_step(eps, D) / eps;
}

EpsilonTable epsilon_sequence(const ValencySequence& valencies, std::size_t K, const ExactPolicy& policy) {
  EpsilonTable t;
  t.K = K;
  for (std::size_t k = 0; k <= K; ++k) t.degrees.push_back(valencies(K - k));
  mpq_class eps(static_cast<unsigned long>(t.degrees[0] - 1), static_cast<unsigned long>(t.degrees[0]));
  bool exact = policy.admits(0, eps);
  double x = to_double(eps);
  for (std::size_t k = 0; k <= K; ++k) {
    if (exact) {
      t.eps.exact.push_back(eps);
      x = to_double(eps);
    }
    t.eps.values.push_back(x);
    if (k == K) break;
    const std::size_t D = t.degrees[k + 1];
    if (exact) {
      mpq_class next = exact_step(eps, D);
      exact = policy.admits(k + 1, next);
      if (exact) {
        eps = std::move(next);
        continue;
      }
    }
    x = ratio_step(x, D);
  }
  return t;
}

std::vector<std::size_t> tree_degrees(const ValencySequence& valencies, std::size_t K, std::size_t k) {
  if (k > K) throw InvalidInput("need k <= K");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j <= k; ++j) out.push_back(valencies(K - k + j));
  return out;
}

mpq_class mixed_brute_force_ratio(const ValencySequence& valencies, std::size_t K, std::size_t k, Exec exec) {
  return brute_force_ratio(tree_degrees(valencies, K, k), exec);
}

std::vector<DecayRow> decay_report(const ValencySequence& valencies, std::size_t K_max, const DecayOptions& opts) {
  if (opts.eta && *opts.eta <= 0) throw InvalidInput("eta must be positive");
  std::vector<DecayRow> rows(K_max + 1);
  const auto row = [&](std::size_t K) {
    const EpsilonTable t = epsilon_sequence(valencies, K, opts.policy);
    DecayRow r;
    r.K = K;
    r.d_K = valencies(K);
    r.eps = t.eps.values.back();
    if (t.eps.is_exact(K)) r.exact = t.eps.exact[K];
    if (opts.eta) r.normalized = r.eps * std::pow(static_cast<double>(K), *opts.eta);
    rows[K] = std::move(r);
  };
  if (opts.exec == Exec::serial) {
    for (std::size_t K = 0; K <= K_max; ++K) row(K);
  } else {
    // row K costs O(K), so hand out the expensive rows first
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i <= static_cast<std::int64_t>(K_max); ++i) row(K_max - static_cast<std::size_t>(i));
  }
  return rows;
}

std::size_t plateau_end(const std::vector<DecayRow>& rows) {
  std::size_t end = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].d_K != rows[i - 1].d_K) end = rows[i].K;
  }
  return end;
}

// ---------------------------------------------------------------------------

DPInstance DPInstance::mother(std::size_t d, const std::vector<BElement>& generators) {
  DPInstance inst;
  inst.valencies = ValencySequence::constant(d);
  for (const auto& b : generators) inst.directed.push_back(DirectedSpec::constant(b));
  inst.validate();
  return inst;
}

void DPInstance::validate() const {
  for (const auto& h : directed) h.validate(valencies, 0, true);
}

nlohmann::json DPInstance::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& h : directed) gens.push_back(h.to_json());
  return {{"valency", valencies.to_json()}, {"directed", gens}, {"level", level}};
}

DPInstance DPInstance::from_json(const nlohmann::json& j) {
  DPInstance inst;
  inst.valencies = ValencySequence::from_json(j.at("valency"));
  for (const auto& g : j.at("directed")) inst.directed.push_back(DirectedSpec::from_json(g, inst.valencies));
  inst.level = j.value("level", std::size_t{0});
  inst.validate();
  return inst;
}

DPInstance shift_instance(const DPInstance& inst) {
  inst.validate();
  DPInstance out;
  out.valencies = inst.valencies.shift(1);
  for (const auto& h : inst.directed) out.directed.push_back(h.shift());
  out.level = inst.level + 1;
  out.validate();
  return out;
}

RelationCheck check_shift_relations(const DPInstance& inst, std::size_t samples, std::size_t word_length,
                                    std::uint64_t seed) {
  inst.validate();
  RelationCheck out;
  if (inst.directed.empty()) return out;
  const DPInstance shifted = shift_instance(inst);
  Alphabet al0(inst.valencies);
  Alphabet al1(shifted.valencies);
  std::vector<GroupWord> g0, g1;
  for (std::size_t i = 0; i < inst.directed.size(); ++i) {
    g0.push_back(al0.directed(inst.directed[i]));
    g1.push_back(al1.directed(shifted.directed[i]));
  }
  using Letters = std::vector<std::pair<std::size_t, bool>>;  // (generator, inverted)
  const auto build = [](Alphabet& al, const std::vector<GroupWord>& gens, const Letters& letters) {
    GroupWord w = al.identity();
    for (const auto& [i, inv] : letters) w *= inv ? gens[i].inverse() : gens[i];
    return w;
  };
  const auto describe = [](const Letters& letters) {
    std::ostringstream s;
    for (std::size_t n = 0; n < letters.size(); ++n) {
      s << (n ? " " : "") << "h" << letters[n].first << (letters[n].second ? "^-1" : "");
    }
    return s.str();
  };

  Rng rng = stream_rng(seed, 0);
  std::uniform_int_distribution<std::size_t> pick(0, inst.directed.size() - 1);
  std::bernoulli_distribution coin(0.5);
  const auto random_letters = [&](std::size_t n) {
    Letters l;
    for (std::size_t i = 0; i < n; ++i) l.emplace_back(pick(rng), coin(rng));
    return l;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    const Letters u = random_letters(std::max<std::size_t>(1, word_length));
    const Letters v = random_letters(std::max<std::size_t>(1, word_length / 2));
    DirectedSpec value;
    bool first = true;
    for (const auto& [i, inv] : u) {
      const DirectedSpec x = inv ? directed_inverse(inst.directed[i]) : inst.directed[i];
      value = first ? x : directed_product(value, x);
      first = false;
    }
    const std::uint64_t ord = order(value);
    // v u^ord v^-1
    Letters relation = v;
    for (std::uint64_t r = 0; r < ord; ++r) relation.insert(relation.end(), u.begin(), u.end());
    for (auto it = v.rbegin(); it != v.rend(); ++it) relation.emplace_back(it->first, !it->second);

    ++out.checked;
    const bool trivial0 = is_identity(al0, build(al0, g0, relation));
    const bool trivial1 = is_identity(al1, build(al1, g1, relation));
    if (!trivial0 || !trivial1) {
      ++out.violations;
      if (!out.first) out.first = describe(relation);
    }
    al0.clear_memo();
    al1.clear_memo();
  }
  return out;
}

// ---------------------------------------------------------------------------

void OmegaCore::validate() const {
  if (interior_size <= 0 || interior_size > size) throw InvalidInput("need 0 < |Int(Omega)| <= |Omega|");
}

mpq_class omega_ratio(const OmegaCore& core, const mpq_class& eps_K_K) {
  core.validate();
  if (eps_K_K <= 0 || eps_K_K >= 1) throw InvalidInput("eps must lie in (0, 1)");
  mpq_class ratio(core.interior_size, core.size);
  ratio.canonicalize();
  return mpq_class((1 - eps_K_K) * ratio);
}

}  // namespace folner
