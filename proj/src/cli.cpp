#include "folner/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <omp.h>

#include "folner/dp.hpp"
#include "folner/errors.hpp"
#include "folner/folner.hpp"
#include "folner/mother.hpp"
#include "folner/words.hpp"

namespace folner {

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr std::size_t kPrintBits = 65536;

std::string rational(const mpq_class& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

template <class T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

template <class T>
void write_opt(ojson& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

std::size_t need(const std::optional<std::size_t>& v, const char* name) {
  if (!v) throw InvalidInput(std::string("missing --") + name);
  return *v;
}

Exec exec_of(const RunConfig& c) {
  if (c.exec == "serial") return Exec::serial;
  if (c.exec == "parallel") return Exec::parallel;
  throw InvalidInput("exec must be serial or parallel");
}

ExactPolicy policy_of(const RunConfig& c, std::size_t default_bits = std::size_t{1} << 20) {
  return ExactPolicy{c.exact_index.value_or(64), c.max_bits.value_or(default_bits)};
}

ValencySequence valency_of(const RunConfig& c) {
  if (c.valency) return ValencySequence::from_json(*c.valency);
  if (c.d) return ValencySequence::constant(*c.d);
  throw InvalidInput("missing --valency or --d");
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void add_check(Report& r, std::string name, bool pass, std::string detail, std::optional<ojson> witness = {}) {
  r.checks.push_back({std::move(name), pass, std::move(detail), pass ? std::nullopt : std::move(witness)});
}

ojson profile_json(const FolnerProfile& p) { return ojson::parse(p.to_json().dump()); }

// ---------------------------------------------------------------------------

void run_delta(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  const std::size_t k_max = need(c.k_max, "k-max");
  const auto seq = delta_sequence(d, k_max, policy_of(c));
  r.columns = {"k", "delta", "delta_float"};
  r.rational_columns = {"delta"};
  bool decreasing = true;
  std::optional<std::size_t> first_bad;
  for (std::size_t k = 0; k <= k_max; ++k) {
    ojson row;
    row["k"] = k;
    row["delta"] = seq.is_exact(k) ? ojson(rational(seq.exact[k])) : ojson(nullptr);
    row["delta_float"] = seq.values[k];
    r.rows.push_back(std::move(row));
    if (k > 0 && !(seq.values[k] < seq.values[k - 1]) && !(seq.is_exact(k) && seq.exact[k] < seq.exact[k - 1])) {
      decreasing = false;
      if (!first_bad) first_bad = k;
    }
  }
  add_check(r, "delta_0 = 1 - 1/d", seq.exact.empty() || seq.exact[0] == mpq_class(d - 1, d),
            "delta_0 = " + (seq.exact.empty() ? std::to_string(seq.values[0]) : rational(seq.exact[0])));
  add_check(r, "delta strictly decreasing", decreasing,
            first_bad ? "first non-decrease at k = " + std::to_string(*first_bad) : "k <= " + std::to_string(k_max),
            first_bad ? std::optional<ojson>(ojson{{"k", *first_bad}}) : std::nullopt);
}

void run_epsilon(const RunConfig& c, Report& r) {
  const auto v = valency_of(c);
  const std::size_t K = need(c.K, "K");
  const auto t = epsilon_sequence(v, K, policy_of(c));
  r.columns = {"k", "D", "eps", "eps_float"};
  r.rational_columns = {"eps"};
  std::optional<std::size_t> bad;
  for (std::size_t k = 0; k <= K; ++k) {
    ojson row;
    row["k"] = k;
    row["D"] = t.degrees[k];
    row["eps"] = t.eps.is_exact(k) ? ojson(rational(t.eps.exact[k])) : ojson(nullptr);
    row["eps_float"] = t.eps.values[k];
    r.rows.push_back(std::move(row));
    if (k > 0 && !bad) {
      const bool dec = t.eps.is_exact(k) ? t.eps.exact[k] < t.eps.exact[k - 1] : t.eps.values[k] < t.eps.values[k - 1];
      if (!dec) bad = k;
    }
  }
  add_check(r, "eps_k strictly decreasing in k", !bad, bad ? "fails at k = " + std::to_string(*bad) : "ok",
            bad ? std::optional<ojson>(ojson{{"K", K}, {"k", *bad}}) : std::nullopt);
  if (v.is_constant()) {
    const auto delta = delta_sequence(v(0), K, policy_of(c));
    std::optional<std::size_t> mismatch;
    for (std::size_t k = 0; k <= K && !mismatch; ++k) {
      const bool same = t.eps.is_exact(k) && delta.is_exact(k) ? t.eps.exact[k] == delta.exact[k]
                                                               : t.eps.values[k] == delta.values[k];
      if (!same) mismatch = k;
    }
    add_check(r, "constant valency: eps_k = delta_k", !mismatch,
              mismatch ? "differs at k = " + std::to_string(*mismatch) : "k <= " + std::to_string(K),
              mismatch ? std::optional<ojson>(ojson{{"k", *mismatch}}) : std::nullopt);
  }
}

void run_cardinality(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  const std::size_t k_max = need(c.k_max, "k-max");
  const auto counts = cardinalities(d, k_max, c.max_bits.value_or(std::size_t{1} << 24));
  const auto deltas = delta_sequence(d, k_max, ExactPolicy{k_max, std::size_t{1} << 30});
  r.columns = {"k", "interior", "boundary", "total", "total_bits", "interior_ratio", "interior_ratio_float"};
  r.rational_columns = {"interior_ratio"};
  bool ratio_ok = true;
  bool lower_ok = true;
  bool upper_ok = true;
  std::optional<ojson> witness;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const auto total = counts[k].total();
    mpq_class ratio(counts[k].interior, total);
    ratio.canonicalize();
    ojson row;
    row["k"] = k;
    row["interior"] = counts[k].interior.get_str();
    row["boundary"] = counts[k].boundary.get_str();
    row["total"] = total.get_str();
    row["total_bits"] = mpz_sizeinbase(total.get_mpz_t(), 2);
    row["interior_ratio"] = rational(ratio);
    row["interior_ratio_float"] = to_double(ratio);
    r.rows.push_back(std::move(row));
    const bool this_ratio = ratio == 1 - deltas.exact[k];
    // |L_k| >= 2^(2^k), i.e. bits(|L_k|) - 1 >= 2^k
    const bool this_lower = k >= 63 || mpz_sizeinbase(total.get_mpz_t(), 2) - 1 >= (std::uint64_t{1} << k);
    bool this_upper = true;
    try {
      this_upper = total <= cardinality_upper_bound(d, k);
    } catch (const ResourceLimit&) {
    }
    if ((!this_ratio || !this_lower || !this_upper) && !witness) witness = ojson{{"d", d}, {"k", k}};
    ratio_ok = ratio_ok && this_ratio;
    lower_ok = lower_ok && this_lower;
    upper_ok = upper_ok && this_upper;
  }
  add_check(r, "interior/total = 1 - delta_k", ratio_ok, "exact rational comparison", witness);
  add_check(r, "|L_k| >= 2^(2^k)", lower_ok, "k <= " + std::to_string(k_max), witness);
  add_check(r, "|L_k| <= closed-form bound", upper_ok, "k <= " + std::to_string(k_max), witness);
}

void run_sample(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  const std::size_t k = need(c.k, "k");
  const std::uint64_t n = c.n.value_or(100000);
  const Stratum stratum = parse_stratum(c.stratum.value_or("member"));
  const ProfileSampler sampler(d, k);
  const auto tally = sample_tally(sampler, k, stratum, n, c.seed, exec_of(c));
  const auto deltas = delta_sequence(d, k, policy_of(c));
  const double p = 1 - deltas.values[k];
  const double frac = n ? static_cast<double>(tally.interior) / n : 0.0;
  const double se = n ? std::sqrt(p * (1 - p) / n) : 0.0;
  r.columns = {"k", "stratum", "samples", "members", "interior", "interior_fraction", "expected", "expected_float",
               "se", "z"};
  r.rational_columns = {"expected"};
  ojson row;
  row["k"] = k;
  row["stratum"] = to_string(stratum);
  row["samples"] = n;
  row["members"] = tally.members;
  row["interior"] = tally.interior;
  row["interior_fraction"] = frac;
  row["expected"] = deltas.is_exact(k) ? ojson(rational(1 - deltas.exact[k])) : ojson(nullptr);
  row["expected_float"] = p;
  row["se"] = se;
  row["z"] = se > 0 ? (frac - p) / se : 0.0;
  r.rows.push_back(std::move(row));

  std::uint64_t expected_interior = stratum == Stratum::interior ? n : 0;
  const bool contract = tally.members == n && (stratum == Stratum::member || tally.interior == expected_interior);
  std::optional<ojson> witness;
  if (!contract) {
    for (std::uint64_t i = 0; i < n; ++i) {
      Rng rng = stream_rng(c.seed, i);
      const auto g = sampler.sample(k, stratum, rng);
      const auto a = g.analysis();
      const bool ok = a.member && (stratum == Stratum::member || a.interior == (stratum == Stratum::interior));
      if (!ok) {
        witness = ojson{{"sample", i}, {"k", k}, {"profile", profile_json(g)}};
        break;
      }
    }
  }
  add_check(r, "samples lie in the requested stratum", contract,
            std::to_string(tally.members) + " members of " + std::to_string(n), witness);
  if (stratum == Stratum::member && n > 0) {
    const bool close = std::abs(frac - p) <= 4 * se;
    add_check(r, "interior fraction within 4 SE of 1 - delta_k", close,
              "z = " + std::to_string(se > 0 ? (frac - p) / se : 0.0));
  }
}

void run_member(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  std::optional<FolnerProfile> profile;
  std::string source;
  if (c.profile) {
    profile = FolnerProfile::from_json(read_json_file(*c.profile), d);
    source = "profile";
  } else if (c.word) {
    Alphabet al(ValencySequence::constant(d));
    if (c.generators) load_generator_table(al, read_json_file(*c.generators));
    profile = recognize_word(al, al.parse(*c.word), need(c.k, "k"));
    source = "word";
  } else {
    throw InvalidInput("member needs --profile or --word");
  }
  std::string status = "outside";
  r.columns = {"source", "k", "member", "interior", "status", "spine"};
  ojson row;
  row["source"] = source;
  if (profile) {
    const auto a = profile->analysis();
    status = !a.member ? "outside" : a.interior ? "interior" : "boundary";
    row["k"] = profile->k();
    row["member"] = a.member;
    row["interior"] = a.interior;
    row["status"] = status;
    std::string sp;
    if (a.member) {
      for (auto t : spine(*profile)) sp += (sp.empty() ? "" : " ") + std::to_string(t + 1);
    }
    row["spine"] = sp;
  } else {
    row["k"] = need(c.k, "k");
    row["member"] = false;
    row["interior"] = false;
    row["status"] = status;
    row["spine"] = "";
  }
  r.rows.push_back(std::move(row));
  if (c.expect) {
    const std::string& e = *c.expect;
    if (e != "member" && e != "interior" && e != "boundary" && e != "outside") {
      throw InvalidInput("expect must be member, interior, boundary or outside");
    }
    const bool ok = e == status || (e == "member" && status != "outside");
    std::optional<ojson> witness;
    if (profile) witness = ojson{{"profile", profile_json(*profile)}};
    add_check(r, "status is " + e, ok, "status = " + status, witness);
  }
}

void run_lemma(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  const std::size_t k_top = need(c.k, "k");
  const std::uint64_t n = c.n.value_or(1000);
  const ProfileSampler sampler(d, k_top);
  r.columns = {"k", "trials", "interior_trials", "violations"};
  for (std::size_t k = 0; k <= k_top; ++k) {
    // each depth gets its own seed stream block
    const auto rep = lemma_suite(sampler, k, n, c.seed + 0x9e3779b97f4a7c15ULL * k, exec_of(c));
    ojson row;
    row["k"] = k;
    row["trials"] = rep.trials;
    row["interior_trials"] = rep.interior_trials;
    row["violations"] = rep.violations;
    r.rows.push_back(std::move(row));
    std::optional<ojson> witness;
    if (rep.first) {
      witness = ojson::parse(rep.first->witness.dump());
      (*witness)["trial"] = rep.first->trial;
      (*witness)["property"] = rep.first->property;
    }
    add_check(r, "generator action rules at k = " + std::to_string(k), rep.violations == 0,
              std::to_string(rep.violations) + " violations in " + std::to_string(n) + " trials", witness);
  }
}

void run_oracle(const RunConfig& c, Report& r) {
  const std::size_t k = need(c.k, "k");
  std::vector<std::size_t> degrees;
  mpq_class recursion;
  if (c.valency) {
    const auto v = valency_of(c);
    const std::size_t K = c.K.value_or(k);
    degrees = tree_degrees(v, K, k);
    recursion = 1 - epsilon_sequence(v, K, ExactPolicy{K, std::size_t{1} << 30}).eps.exact[k];
  } else {
    const std::size_t d = need(c.d, "d");
    degrees.assign(k + 1, d);
    recursion = 1 - delta_sequence(d, k, ExactPolicy{k, std::size_t{1} << 30}).exact[k];
  }
  const auto counts = brute_force_counts(degrees, exec_of(c));
  mpq_class brute(mpz_class(static_cast<unsigned long>(counts.interior)),
                  mpz_class(static_cast<unsigned long>(counts.members)));
  brute.canonicalize();
  r.columns = {"k", "degrees", "assignments", "members", "interior", "brute_force", "brute_force_float", "recursion",
               "recursion_float"};
  r.rational_columns = {"brute_force", "recursion"};
  ojson row;
  row["k"] = k;
  std::string deg;
  for (auto x : degrees) deg += (deg.empty() ? "" : " ") + std::to_string(x);
  row["degrees"] = deg;
  row["assignments"] = counts.assignments;
  row["members"] = counts.members;
  row["interior"] = counts.interior;
  row["brute_force"] = rational(brute);
  row["brute_force_float"] = to_double(brute);
  row["recursion"] = rational(recursion);
  row["recursion_float"] = to_double(recursion);
  r.rows.push_back(std::move(row));
  add_check(r, "brute force = recursion", brute == recursion, rational(brute) + " vs " + rational(recursion),
            ojson{{"degrees", degrees}, {"k", k}});
}

void run_folfun(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  std::size_t lo = 1;
  std::size_t hi = 1;
  if (c.n) {
    lo = hi = static_cast<std::size_t>(*c.n);
  } else {
    hi = need(c.n_max, "n or --n-max");
  }
  r.columns = {"n", "k_star", "log2log2_size", "size_bits", "size"};
  bool lower_ok = true;
  std::optional<ojson> witness;
  for (std::size_t n = lo; n <= hi; ++n) {
    const auto b = folner_function_bound(d, n, c.max_bits.value_or(std::size_t{1} << 24));
    ojson row;
    row["n"] = n;
    row["k_star"] = b.k_star;
    row["log2log2_size"] = b.log2log2_size ? ojson(*b.log2log2_size) : ojson(nullptr);
    row["size_bits"] = b.size ? ojson(mpz_sizeinbase(b.size->get_mpz_t(), 2)) : ojson(nullptr);
    // decimal digits only for sizes that stay readable
    const bool print = b.size && mpz_sizeinbase(b.size->get_mpz_t(), 2) <= kPrintBits;
    row["size"] = print ? ojson(b.size->get_str()) : ojson(nullptr);
    r.rows.push_back(std::move(row));
    if (b.log2log2_size && *b.log2log2_size < static_cast<double>(b.k_star)) {
      lower_ok = false;
      if (!witness) witness = ojson{{"d", d}, {"n", n}, {"k_star", b.k_star}};
    }
  }
  if (d >= 3) add_check(r, "log2 log2 |L_k*| >= k*", lower_ok, "n in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]", witness);
}

void run_embed(const RunConfig& c, Report& r) {
  const std::size_t d = c.d.value_or(3);
  const std::uint64_t n = c.n.value_or(100);
  const std::size_t depth = c.depth.value_or(3);
  Alphabet al(ValencySequence::constant(d));
  Rng rng = stream_rng(c.seed, 0);
  std::vector<GroupWord> words;
  for (std::uint64_t i = 0; i < n; ++i) words.push_back(al.directed(random_directed(al.valencies(), 0, 1, rng, false)));
  std::uint64_t alternate = 0;
  std::uint64_t directed = 0;
  std::uint64_t homomorphic = 0;
  std::optional<ojson> witness;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto img = double_embed(al, words[i], depth);
    directed += img.is_directed();
    alternate += img.all_even();
    const auto& next = words[(i + 1) % n];
    const auto prod = double_embed(al, words[i] * next, depth);
    const auto other = double_embed(al, next, depth);
    bool ok = true;
    for (std::size_t j = 1; j <= depth; ++j) {
      ok = ok && level_permutation(prod, j) == compose(level_permutation(img, j), level_permutation(other, j));
    }
    homomorphic += ok;
    if ((!ok || !img.is_directed() || !img.all_even()) && !witness) {
      witness = ojson{{"sample", i}, {"word", al.format(words[i])}};
    }
  }
  r.columns = {"source_degree", "target_degree", "samples", "depth", "directed", "alternate", "homomorphic"};
  ojson row;
  row["source_degree"] = d;
  row["target_degree"] = 2 * d;
  row["samples"] = n;
  row["depth"] = depth;
  row["directed"] = directed;
  row["alternate"] = alternate;
  row["homomorphic"] = homomorphic;
  r.rows.push_back(std::move(row));
  add_check(r, "images are directed", directed == n, std::to_string(directed) + " of " + std::to_string(n), witness);
  add_check(r, "images are alternate", alternate == n, std::to_string(alternate) + " of " + std::to_string(n), witness);
  add_check(r, "level permutations multiply", homomorphic == n,
            std::to_string(homomorphic) + " of " + std::to_string(n), witness);
}

void run_orbit(const RunConfig& c, Report& r) {
  const std::size_t d = need(c.d, "d");
  const std::size_t j_max = c.j.value_or(3);
  r.columns = {"j", "points", "generators", "orbit", "transitive", "tau"};
  for (std::size_t j = 1; j <= j_max; ++j) {
    const auto gens = c.quotient ? stabilizer_quotient_generators(d, j) : generator_level_permutations(d, j);
    const auto orb = orbit(gens, 0);
    const std::size_t points = gens.empty() ? 0 : gens[0].degree();
    ojson row;
    row["j"] = j;
    row["points"] = points;
    row["generators"] = gens.size();
    row["orbit"] = orb.size();
    row["transitive"] = orb.size() == points;
    std::string tau;
    if (c.quotient) {
      const auto t = find_tau(gens);
      tau = t ? t->to_string() : "";
    }
    row["tau"] = tau;
    r.rows.push_back(std::move(row));
    add_check(r, "transitive on level " + std::to_string(j), orb.size() == points,
              std::to_string(orb.size()) + " of " + std::to_string(points) + " points", ojson{{"d", d}, {"j", j}});
  }
}

void run_decay(const RunConfig& c, Report& r) {
  const auto v = valency_of(c);
  const std::size_t K_max = need(c.K_max, "K-max");
  DecayOptions opts;
  opts.eta = c.eta;
  opts.exec = exec_of(c);
  opts.policy = c.exact_index ? policy_of(c, std::size_t{1} << 16) : ExactPolicy::floats_only();
  const auto rows = decay_report(v, K_max, opts);
  r.columns = {"K", "d_K", "eps", "eps_float"};
  r.rational_columns = {"eps"};
  if (c.eta) r.columns.push_back("normalized");
  for (const auto& x : rows) {
    ojson row;
    row["K"] = x.K;
    row["d_K"] = x.d_K;
    row["eps"] = x.exact ? ojson(rational(*x.exact)) : ojson(nullptr);
    row["eps_float"] = x.eps;
    if (c.eta) row["normalized"] = *x.normalized;
    r.rows.push_back(std::move(row));
  }
  const std::size_t end = plateau_end(rows);
  std::optional<std::size_t> bad;
  for (std::size_t K = end; K < K_max && !bad; ++K) {
    if (rows[K + 1].eps > rows[K].eps) bad = K + 1;
  }
  add_check(r, "non-increasing past the plateau", !bad,
            "plateau ends at K = " + std::to_string(end) + (bad ? ", increase at K = " + std::to_string(*bad) : ""),
            bad ? std::optional<ojson>(ojson{{"K", *bad}}) : std::nullopt);
  if (v.is_constant()) {
    const auto delta = delta_sequence(v(0), K_max, opts.policy);
    std::optional<std::size_t> mismatch;
    for (std::size_t K = 0; K <= K_max && !mismatch; ++K) {
      if (rows[K].eps != delta.values[K]) mismatch = K;
    }
    add_check(r, "constant valency: eps_K^K = delta_K", !mismatch, "K <= " + std::to_string(K_max),
              mismatch ? std::optional<ojson>(ojson{{"K", *mismatch}}) : std::nullopt);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"delta", "epsilon", "cardinality", "sample", "member", "lemma-check",
                                              "oracle", "folfun", "embed", "orbit", "decay"};
  return names;
}

std::string default_format(const std::string& command) {
  static const std::set<std::string> tables{"delta", "epsilon", "cardinality", "decay"};
  return tables.count(command) ? "csv" : "json";
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> keys{
      "command", "d",      "valency", "k",          "K",      "k_max",    "K_max",  "n",
      "n_max",   "j",      "depth",   "exact_index", "max_bits", "stratum", "eta",   "profile",
      "word",    "generators", "expect", "quotient", "seed",    "exec",     "format", "output"};
  if (!j.is_object()) throw InvalidInput("configuration must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!keys.count(key)) throw InvalidInput("unknown configuration key: " + key);
  }
  RunConfig c;
  try {
    c.command = j.value("command", std::string{});
    read_opt(j, "d", c.d);
    if (j.contains("valency") && !j.at("valency").is_null()) c.valency = j.at("valency");
    read_opt(j, "k", c.k);
    read_opt(j, "K", c.K);
    read_opt(j, "k_max", c.k_max);
    read_opt(j, "K_max", c.K_max);
    read_opt(j, "n", c.n);
    read_opt(j, "n_max", c.n_max);
    read_opt(j, "j", c.j);
    read_opt(j, "depth", c.depth);
    read_opt(j, "exact_index", c.exact_index);
    read_opt(j, "max_bits", c.max_bits);
    read_opt(j, "stratum", c.stratum);
    read_opt(j, "eta", c.eta);
    read_opt(j, "profile", c.profile);
    read_opt(j, "word", c.word);
    read_opt(j, "generators", c.generators);
    read_opt(j, "expect", c.expect);
    c.quotient = j.value("quotient", false);
    c.seed = j.value("seed", std::uint64_t{1});
    c.exec = j.value("exec", std::string("parallel"));
    read_opt(j, "format", c.format);
    read_opt(j, "output", c.output);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad configuration value: ") + e.what());
  }
  return c;
}

ojson RunConfig::to_json() const {
  ojson j;
  j["command"] = command;
  write_opt(j, "d", d);
  if (valency) j["valency"] = ojson::parse(valency->dump());
  write_opt(j, "k", k);
  write_opt(j, "K", K);
  write_opt(j, "k_max", k_max);
  write_opt(j, "K_max", K_max);
  write_opt(j, "n", n);
  write_opt(j, "n_max", n_max);
  write_opt(j, "j", this->j);
  write_opt(j, "depth", depth);
  write_opt(j, "exact_index", exact_index);
  write_opt(j, "max_bits", max_bits);
  write_opt(j, "stratum", stratum);
  write_opt(j, "eta", eta);
  write_opt(j, "profile", profile);
  write_opt(j, "word", word);
  write_opt(j, "generators", generators);
  write_opt(j, "expect", expect);
  if (quotient) j["quotient"] = true;
  j["seed"] = seed;
  j["exec"] = exec;
  write_opt(j, "format", format);
  write_opt(j, "output", output);
  return j;
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ojson Report::to_json() const {
  ojson j;
  j["metadata"] = metadata;
  j["rows"] = ojson::array();
  for (const auto& row : rows) {
    ojson out;
    for (const auto& col : columns) {
      const auto it = row.find(col);
      out[col] = it == row.end() ? ojson(nullptr) : *it;
    }
    j["rows"].push_back(std::move(out));
  }
  ojson checks_json = ojson::array();
  for (const auto& c : checks) {
    ojson x;
    x["name"] = c.name;
    x["pass"] = c.pass;
    x["detail"] = c.detail;
    if (c.witness) x["witness"] = *c.witness;
    checks_json.push_back(std::move(x));
  }
  j["summary"] = {{"pass", pass()}, {"checks", checks_json}};
  return j;
}

namespace {

std::string csv_field(const ojson& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

void Report::write_csv(std::ostream& out) const {
  const auto is_rational = [&](const std::string& col) {
    return std::find(rational_columns.begin(), rational_columns.end(), col) != rational_columns.end();
  };
  std::string header;
  for (const auto& col : columns) {
    if (!header.empty()) header += ",";
    header += is_rational(col) ? col + "_num," + col + "_den" : col;
  }
  out << header << "\n";
  for (const auto& row : rows) {
    std::string line;
    bool first = true;
    for (const auto& col : columns) {
      if (!first) line += ",";
      first = false;
      const auto it = row.find(col);
      const ojson v = it == row.end() ? ojson(nullptr) : *it;
      if (is_rational(col)) {
        if (v.is_null()) {
          line += ",";
        } else {
          const auto s = v.get<std::string>();
          const auto slash = s.find('/');
          line += s.substr(0, slash) + "," + s.substr(slash + 1);
        }
      } else {
        line += csv_field(v);
      }
    }
    out << line << "\n";
  }
}

void Report::write_summary(std::ostream& out) const {
  for (const auto& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    if (c.witness) out << "  witness: " << c.witness->dump() << "\n";
  }
}

Report run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  const std::string& cmd = config.command;
  if (cmd == "delta") {
    run_delta(config, r);
  } else if (cmd == "epsilon") {
    run_epsilon(config, r);
  } else if (cmd == "cardinality") {
    run_cardinality(config, r);
  } else if (cmd == "sample") {
    run_sample(config, r);
  } else if (cmd == "member") {
    run_member(config, r);
  } else if (cmd == "lemma-check") {
    run_lemma(config, r);
  } else if (cmd == "oracle") {
    run_oracle(config, r);
  } else if (cmd == "folfun") {
    run_folfun(config, r);
  } else if (cmd == "embed") {
    run_embed(config, r);
  } else if (cmd == "orbit") {
    run_orbit(config, r);
  } else if (cmd == "decay") {
    run_decay(config, r);
  } else {
    throw InvalidInput("unknown subcommand: " + cmd);
  }
  const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  r.metadata["config"] = config.to_json();
  r.metadata["version"] = kVersion;
  r.metadata["threads"] = omp_get_max_threads();
  r.metadata["wall_time_ms"] = std::round(ms * 1000) / 1000;
  return r;
}

}  // namespace folner
