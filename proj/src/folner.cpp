#include "folner/folner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <omp.h>

#include "folner/errors.hpp"

namespace folner {

bool ExactPolicy::admits(std::size_t k, const mpq_class& q) const {
  return k <= exact_index && max_bits > 0 && mpz_sizeinbase(q.get_num_mpz_t(), 2) <= max_bits &&
         mpz_sizeinbase(q.get_den_mpz_t(), 2) <= max_bits;
}

double to_double(const mpq_class& q) {
  if (q == 0) return 0.0;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  const long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // scaled quotient with 63 or 64 bits; a sticky bit records a nonzero remainder
  const long s = 63 + db - nb;
  mpz_class scaled = abs(num);
  if (s >= 0) {
    scaled <<= static_cast<mp_bitcnt_t>(s);
  } else {
    scaled >>= static_cast<mp_bitcnt_t>(-s);
  }
  mpz_class quot, rem;
  mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  std::uint64_t bits = mpz_get_ui(quot.get_mpz_t());
  const bool dropped = s < 0 && mpz_scan1(num.get_mpz_t(), 0) < static_cast<mp_bitcnt_t>(-s);
  if (rem != 0 || dropped) bits |= 1;
  const double out = std::ldexp(static_cast<double>(bits), static_cast<int>(-s));
  return num < 0 ? -out : out;
}

double ratio_step(double x, std::size_t D) {
  double p = 1.0;
  for (std::size_t i = 0; i + 1 < D; ++i) p *= x;
  return x * (1.0 - p) / (1.0 - p * x);
}

RatioSequence delta_sequence(std::size_t d, std::size_t k_max, const ExactPolicy& policy) {
  if (d < 2) throw InvalidInput("delta_sequence needs d >= 2");
  RatioSequence out;
  mpq_class delta(static_cast<unsigned long>(d - 1), static_cast<unsigned long>(d));
  bool exact = policy.admits(0, delta);
  double x = to_double(delta);
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (exact) {
      out.exact.push_back(delta);
      x = to_double(delta);
    }
    out.values.push_back(x);
    if (k == k_max) break;
    if (exact) {
      // delta = n/m gives 1 - delta' = m^{d-1} / S with S = sum_i m^i n^{d-1-i}, already in lowest terms.
      const mpz_class& n = delta.get_num();
      const mpz_class& m = delta.get_den();
      mpz_class s = 0;
      mpz_class mp = 1;
      for (std::size_t i = 0; i < d; ++i) {
        mpz_class np;
        mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), d - 1 - i);
        s += mp * np;
        if (i + 1 < d) mp *= m;
      }
      // mp = m^{d-1}
      mpq_class next;
      next.get_num() = s - mp;
      next.get_den() = s;
      exact = policy.admits(k + 1, next);
      if (exact) {
        delta = std::move(next);
        continue;
      }
    }
    x = ratio_step(x, d);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

mpz_class alternating_size(std::size_t n) {
  if (n < 2) return 1;
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f / 2;
}

mpz_class pow(const mpz_class& x, std::size_t e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), x.get_mpz_t(), e);
  return out;
}

std::size_t bits(const mpz_class& x) { return mpz_sizeinbase(x.get_mpz_t(), 2); }

}  // namespace

std::vector<CountPair> cardinalities(std::size_t d, std::size_t k_max, std::size_t max_bits) {
  if (d < 3) throw InvalidInput("cardinalities need d >= 3 (A_d transitive)");
  const mpz_class a = alternating_size(d);
  const mpz_class b = pow(a, d - 1) * alternating_size(d - 1);
  std::vector<CountPair> out;
  mpz_class total = b * pow(a, d);
  mpz_class interior = total / d;
  out.push_back({interior, total - interior});
  for (std::size_t k = 0; k < k_max; ++k) {
    if (bits(total) * d + bits(a) > max_bits) {
      throw ResourceLimit("|L_" + std::to_string(k + 1) + "| exceeds the big-integer budget");
    }
    const mpz_class boundary = total - interior;
    const mpz_class power = pow(total, d - 1);
    interior = interior * power * a;
    total = (power * total - pow(boundary, d)) * a;
    out.push_back({interior, total - interior});
  }
  return out;
}

mpz_class cardinality_upper_bound(std::size_t d, std::size_t k) {
  const mpz_class a = alternating_size(d);
  const mpz_class b = pow(a, d - 1) * alternating_size(d - 1);
  const mpz_class dk = pow(mpz_class(static_cast<unsigned long>(d)), k);
  mpz_class geometric = 0;
  for (std::size_t i = 0; i <= k; ++i) geometric += pow(mpz_class(static_cast<unsigned long>(d)), i);
  const mpz_class exponent_a = (d - 1) * dk + geometric;
  if (bits(dk) > 40 || bits(exponent_a) > 40) throw ResourceLimit("closed-form bound too large");
  return pow(b, dk.get_ui()) * pow(a, exponent_a.get_ui());
}

FolnerBound folner_function_bound(std::size_t d, std::size_t n, std::size_t max_bits, std::size_t max_steps) {
  if (d < 2) throw InvalidInput("folner_function_bound needs d >= 2");
  if (n == 0) throw InvalidInput("n must be >= 1");
  // Exact comparisons while the rationals stay small, doubles afterwards.
  const ExactPolicy policy{64, std::size_t{1} << 16};
  const mpq_class target(1, static_cast<unsigned long>(n));
  const double target_d = 1.0 / static_cast<double>(n);
  std::vector<double> values;

  FolnerBound out;
  std::size_t chunk = 64;
  RatioSequence seq = delta_sequence(d, chunk, policy);
  std::size_t k = 0;
  double x = 0;
  while (true) {
    if (k < seq.exact.size()) {
      if (seq.exact[k] <= target) break;
      x = seq.values[k];
    } else {
      x = k < seq.values.size() ? seq.values[k] : ratio_step(x, d);
      if (x <= target_d) break;
    }
    values.push_back(x);
    if (++k > max_steps) throw ResourceLimit("folner_function_bound exceeded the step budget");
  }
  out.k_star = k;
  if (d < 3) return out;

  // lambda = log2 log2 |L_k|, updated without forming |L_k|.
  const double log2_a = std::log2(alternating_size(d).get_d());
  const double log2_b = (d - 1) * log2_a + std::log2(alternating_size(d - 1).get_d());
  const double ell0 = log2_b + d * log2_a;
  double lambda = std::log2(ell0);
  for (std::size_t i = 0; i < out.k_star; ++i) {
    const double c = std::log2(1.0 - std::pow(values[i], static_cast<double>(d))) + log2_a;
    lambda += std::log2(static_cast<double>(d)) + std::log1p(c * std::exp2(-lambda) / d) / std::log(2.0);
  }
  out.log2log2_size = lambda;
  try {
    out.size = cardinalities(d, out.k_star, max_bits).back().total();
  } catch (const ResourceLimit&) {
    out.size.reset();
  }
  return out;
}

// ---------------------------------------------------------------------------

OpenAnalysis analyze(const DirectionTree& tree) {
  const std::size_t k = tree.k();
  if (tree.u.size() != k + 1) throw InvalidInput("direction tree shape mismatch");
  OpenAnalysis out;
  out.open.resize(k + 1);
  out.open_sets.resize(k + 1);
  std::size_t count = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    if (tree.degrees[j] > 64 || tree.degrees[j] < 2) throw InvalidInput("degrees must lie in 2..64");
    if (tree.u[j].size() != count) throw InvalidInput("direction tree level size mismatch");
    count *= tree.degrees[j];
  }
  out.member = true;
  for (std::size_t j = k + 1; j-- > 0;) {
    const auto& u = tree.u[j];
    out.open[j].resize(u.size());
    out.open_sets[j].resize(u.size());
    const std::size_t deg = tree.degrees[j];
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i] >= deg) throw InvalidInput("direction value out of range");
      std::uint64_t mask = 0;
      if (j == k) {
        mask = 1;  // below depth k only child 1 can be open
      } else {
        for (std::size_t t = 0; t < deg; ++t) {
          if (out.open[j + 1][i * deg + t]) mask |= std::uint64_t{1} << t;
        }
        if (mask == 0) out.member = false;
      }
      out.open_sets[j][i] = mask;
      out.open[j][i] = (mask >> u[i]) & 1;
    }
  }
  out.interior = out.member && out.open[0][0];
  return out;
}

// ---------------------------------------------------------------------------

FolnerProfile::FolnerProfile(std::size_t d, std::size_t k, std::vector<std::vector<Permutation>> internal,
                             std::vector<BElement> b_leaves, std::vector<Permutation> a_leaves)
    : d_(d), k_(k), internal_(std::move(internal)), b_leaves_(std::move(b_leaves)), a_leaves_(std::move(a_leaves)) {
  if (d < 3) throw InvalidInput("profiles need d >= 3");
  if (internal_.size() != k + 1) throw InvalidInput("profile needs k+1 internal levels");
  std::size_t count = 1;
  for (const auto& level : internal_) {
    if (level.size() != count) throw InvalidInput("profile level has the wrong number of vertices");
    for (const auto& s : level) {
      if (s.degree() != d || !s.is_even()) throw InvalidInput("internal labels must lie in A_d");
    }
    count *= d;
  }
  count /= d;
  if (b_leaves_.size() != count || a_leaves_.size() != count * (d - 1)) {
    throw InvalidInput("profile leaf block has the wrong size");
  }
  for (const auto& b : b_leaves_) {
    if (b.degree() != d || b.a.size() != d - 1 || b.child_degree() != d || !b.is_valid(true)) {
      throw InvalidInput("B leaf is not an element of B");
    }
  }
  for (const auto& a : a_leaves_) {
    if (a.degree() != d || !a.is_even()) throw InvalidInput("A leaf is not an element of A_d");
  }
}

DirectionTree FolnerProfile::directions() const {
  DirectionTree t;
  t.degrees.assign(k_ + 1, d_);
  for (const auto& level : internal_) {
    std::vector<Point> u;
    u.reserve(level.size());
    for (const auto& s : level) u.push_back(s.preimage(0));
    t.u.push_back(std::move(u));
  }
  return t;
}

namespace {

nlohmann::json vertex_json(const FolnerProfile& p, std::size_t depth, std::size_t index) {
  nlohmann::json j;
  j["sigma"] = p.sigma(depth, index).to_string();
  if (depth == p.k()) {
    j["b"] = p.b_leaf(index).to_json();
    nlohmann::json a = nlohmann::json::array();
    for (Point t = 1; t < p.degree(); ++t) a.push_back(p.a_leaf(index, t).to_string());
    j["a"] = a;
    return j;
  }
  nlohmann::json children = nlohmann::json::array();
  for (std::size_t t = 0; t < p.degree(); ++t) children.push_back(vertex_json(p, depth + 1, index * p.degree() + t));
  j["children"] = children;
  return j;
}

std::size_t json_depth(const nlohmann::json& j) {
  std::size_t k = 0;
  const nlohmann::json* cur = &j;
  while (cur->contains("children")) {
    cur = &cur->at("children").at(0);
    ++k;
  }
  return k;
}

void read_vertex(const nlohmann::json& j, std::size_t d, std::size_t k, std::size_t depth,
                 std::vector<std::vector<Permutation>>& internal, std::vector<BElement>& b_leaves,
                 std::vector<Permutation>& a_leaves) {
  internal[depth].push_back(Permutation::parse(j.at("sigma").get<std::string>(), d));
  if (depth == k) {
    b_leaves.push_back(BElement::from_json(j.at("b"), d, d));
    const auto& a = j.at("a");
    if (a.size() != d - 1) throw InvalidInput("profile leaf block needs d-1 A labels");
    for (const auto& s : a) a_leaves.push_back(Permutation::parse(s.get<std::string>(), d));
    return;
  }
  const auto& children = j.at("children");
  if (children.size() != d) throw InvalidInput("profile vertex needs d children");
  for (const auto& c : children) read_vertex(c, d, k, depth + 1, internal, b_leaves, a_leaves);
}

}  // namespace

nlohmann::json FolnerProfile::to_json() const { return vertex_json(*this, 0, 0); }

FolnerProfile FolnerProfile::from_json(const nlohmann::json& j, std::size_t d) {
  const std::size_t k = json_depth(j);
  std::vector<std::vector<Permutation>> internal(k + 1);
  std::vector<BElement> b_leaves;
  std::vector<Permutation> a_leaves;
  // Children are read depth-first; regroup each level into lexicographic order.
  std::vector<std::vector<Permutation>> dfs(k + 1);
  read_vertex(j, d, k, 0, dfs, b_leaves, a_leaves);
  // Depth-first order on a complete tree already lists each level lexicographically.
  internal = std::move(dfs);
  return FolnerProfile(d, k, std::move(internal), std::move(b_leaves), std::move(a_leaves));
}

bool is_member(const FolnerProfile& p) { return p.analysis().member; }

bool is_interior(const FolnerProfile& p) {
  const auto a = p.analysis();
  if (!a.member) throw InvalidInput("is_interior called on a non-member profile");
  return a.interior;
}

std::vector<Point> spine(const FolnerProfile& p) {
  std::vector<Point> out;
  std::size_t index = 0;
  for (std::size_t j = 0; j <= p.k(); ++j) {
    const Point u = p.sigma(j, index).preimage(0);
    out.push_back(u);
    index = index * p.degree() + u;
  }
  return out;
}

std::optional<FolnerProfile> profile_mul_generator(const FolnerProfile& p, const Permutation& pi) {
  if (pi.degree() != p.degree() || !pi.is_even()) throw InvalidInput("rooted generator must lie in A_d");
  FolnerProfile out = p;
  out.sigma(0, 0) = compose(p.sigma(0, 0), pi);
  return out;
}

std::optional<FolnerProfile> profile_mul_generator(const FolnerProfile& p, const BElement& b) {
  const std::size_t d = p.degree();
  if (b.degree() != d || b.child_degree() != d || !b.is_valid(true)) throw InvalidInput("directed generator must lie in B");
  FolnerProfile out = p;
  // The b factor travels down one path; every other child receives a rooted a_s.
  std::size_t index = 0;
  for (std::size_t depth = 0; depth <= p.k(); ++depth) {
    const Permutation sigma = out.sigma(depth, index);
    std::size_t next = d;
    for (Point t = 0; t < d; ++t) {
      const Point s = sigma(t);
      if (s == 0) {
        next = t;
        continue;
      }
      const Permutation& a = b.at(s);
      if (depth < p.k()) {
        Permutation& child = out.sigma(depth + 1, index * d + t);
        child = compose(child, a);
      } else if (t == 0) {
        if (!a.is_identity()) return std::nullopt;  // B * A stays in B only for a = e
      } else {
        out.a_leaf(index, t) = compose(out.a_leaf(index, t), a);
      }
    }
    out.sigma(depth, index) = compose(sigma, b.rho);
    if (depth == p.k()) {
      if (next == 0) {
        out.b_leaf(index) = b_product(out.b_leaf(index), b);
      } else if (!b.is_identity()) {
        return std::nullopt;  // A * B stays in A only for b = e
      }
    } else {
      index = index * d + next;
    }
  }
  if (!is_member(out)) return std::nullopt;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::optional<Permutation> recognize_rooted(Alphabet& al, const GroupWord& h, std::size_t d) {
  if (h.empty()) return Permutation::identity(d);
  auto dec = al.decompose(h);
  for (const auto& s : dec->sections) {
    if (!is_identity(al, s)) return std::nullopt;
  }
  if (!dec->root.is_even()) return std::nullopt;
  return dec->root;
}

std::optional<BElement> recognize_b(Alphabet& al, const GroupWord& h, std::size_t d) {
  if (h.empty()) return BElement::identity(d);
  auto dec = al.decompose(h);
  if (dec->root(0) != 0 || !dec->root.is_even()) return std::nullopt;
  BElement b;
  b.rho = dec->root;
  for (Point t = 1; t < d; ++t) {
    auto a = recognize_rooted(al, dec->sections[t], d);
    if (!a) return std::nullopt;
    b.a.push_back(*a);
  }
  if (!is_identity(al, h * b_word(al, b).inverse())) return std::nullopt;
  return b;
}

}  // namespace

std::optional<FolnerProfile> recognize_word(Alphabet& alphabet, const GroupWord& w, std::size_t k) {
  if (!alphabet.valencies().is_constant()) throw InvalidInput("recognize_word works in G_d");
  const std::size_t d = alphabet.degree(0);
  const Portrait por = portrait(alphabet, w, k + 1);
  for (const auto& level : por.levels) {
    for (const auto& s : level) {
      if (!s.is_even()) return std::nullopt;
    }
  }
  const auto sections = sections_at_depth(alphabet, w, k + 1);
  std::vector<BElement> b_leaves;
  std::vector<Permutation> a_leaves;
  const std::size_t count = sections.size() / d;
  for (std::size_t v = 0; v < count; ++v) {
    auto b = recognize_b(alphabet, sections[v * d], d);
    if (!b) return std::nullopt;
    b_leaves.push_back(*b);
    for (Point t = 1; t < d; ++t) {
      auto a = recognize_rooted(alphabet, sections[v * d + t], d);
      if (!a) return std::nullopt;
      a_leaves.push_back(*a);
    }
  }
  FolnerProfile p(d, k, por.levels, std::move(b_leaves), std::move(a_leaves));
  if (!is_member(p)) return std::nullopt;
  return p;
}

namespace {

GroupWord vertex_word(Perfect1Witness& wit, const FolnerProfile& p, std::size_t depth, std::size_t index) {
  Alphabet& al = wit.alphabet();
  const std::size_t d = p.degree();
  GroupWord w = al.identity();
  for (Point t = 0; t < d; ++t) {
    GroupWord child;
    if (depth == p.k()) {
      child = t == 0 ? b_word(al, p.b_leaf(index)) : make_generator(al, p.a_leaf(index, t));
    } else {
      child = vertex_word(wit, p, depth + 1, index * d + t);
    }
    if (!child.empty()) w *= wit.embed(t, child);
  }
  w *= make_generator(al, p.sigma(depth, index));
  return al.reduce(w);
}

}  // namespace

GroupWord profile_word(Perfect1Witness& witness, const FolnerProfile& p) {
  if (witness.degree() != p.degree()) throw InvalidInput("witness degree mismatch");
  return vertex_word(witness, p, 0, 0);
}

// ---------------------------------------------------------------------------

Stratum parse_stratum(const std::string& s) {
  if (s == "member") return Stratum::member;
  if (s == "interior") return Stratum::interior;
  if (s == "boundary") return Stratum::boundary;
  throw InvalidInput("unknown stratum: " + s);
}

std::string to_string(Stratum s) {
  switch (s) {
    case Stratum::member: return "member";
    case Stratum::interior: return "interior";
    case Stratum::boundary: return "boundary";
  }
  return "member";
}

ProfileSampler::ProfileSampler(std::size_t d, std::size_t k_max) : d_(d) {
  if (d < 3) throw InvalidInput("the sampler needs d >= 3");
  const RatioSequence deltas = delta_sequence(d, k_max, ExactPolicy{64, 4096});
  weights_.resize(k_max + 1);
  for (std::size_t j = 1; j <= k_max; ++j) {
    // children live in L_{j-1}
    const long double delta = deltas.values[j - 1];
    long double binom = 1;
    for (auto& w : weights_[j]) w.assign(d + 1, 0.0L);
    for (std::size_t i = 0; i <= d; ++i) {
      if (i > 0) binom = binom * (d - i + 1) / i;
      if (i == 0) continue;
      const long double m = binom * std::pow(1.0L - delta, static_cast<long double>(i)) *
                            std::pow(delta, static_cast<long double>(d - i));
      weights_[j][0][i] = m;
      weights_[j][1][i] = m * i / d;
      weights_[j][2][i] = m * (d - i) / d;
    }
  }
}

Permutation ProfileSampler::draw_sigma(Stratum stratum, std::uint64_t open_mask, Rng& rng) const {
  while (true) {
    Permutation s = random_alternating(d_, false, rng);
    const bool open = (open_mask >> s.preimage(0)) & 1;
    if (stratum == Stratum::member || (stratum == Stratum::interior) == open) return s;
  }
}

void ProfileSampler::sample_subtree(std::size_t j, Stratum stratum, Rng& rng, std::size_t depth, std::size_t index,
                                    std::vector<std::vector<Permutation>>& internal, std::vector<BElement>& b_leaves,
                                    std::vector<Permutation>& a_leaves, std::size_t k) const {
  const std::size_t d = d_;
  if (j == 0) {
    internal[depth][index] = draw_sigma(stratum, 1, rng);
    b_leaves[index] = random_belement(d, d, rng, true);
    for (Point t = 1; t < d; ++t) a_leaves[index * (d - 1) + t - 1] = random_alternating(d, false, rng);
    return;
  }
  const auto& w = weights_[j][static_cast<std::size_t>(stratum)];
  const long double total = std::accumulate(w.begin(), w.end(), 0.0L);
  long double r = std::generate_canonical<long double, 64>(rng) * total;
  std::size_t i = d;
  for (std::size_t c = 1; c <= d; ++c) {
    if (w[c] <= 0) continue;
    i = c;
    if (r < w[c]) break;
    r -= w[c];
  }
  // uniform subset of size i via a partial shuffle
  std::vector<Point> slots(d);
  std::iota(slots.begin(), slots.end(), Point{0});
  std::uint64_t mask = 0;
  for (std::size_t c = 0; c < i; ++c) {
    std::uniform_int_distribution<std::size_t> pick(c, d - 1);
    std::swap(slots[c], slots[pick(rng)]);
    mask |= std::uint64_t{1} << slots[c];
  }
  for (Point t = 0; t < d; ++t) {
    const Stratum child = ((mask >> t) & 1) ? Stratum::interior : Stratum::boundary;
    sample_subtree(j - 1, child, rng, depth + 1, index * d + t, internal, b_leaves, a_leaves, k);
  }
  internal[depth][index] = draw_sigma(stratum, mask, rng);
}

FolnerProfile ProfileSampler::sample(std::size_t k, Stratum stratum, Rng& rng) const {
  if (k >= weights_.size()) throw InvalidInput("sampler was built for smaller k");
  std::vector<std::vector<Permutation>> internal(k + 1);
  std::size_t count = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    internal[j].assign(count, Permutation::identity(d_));
    if (j < k) count *= d_;
  }
  std::vector<BElement> b_leaves(count, BElement::identity(d_));
  std::vector<Permutation> a_leaves(count * (d_ - 1), Permutation::identity(d_));
  sample_subtree(k, stratum, rng, 0, 0, internal, b_leaves, a_leaves, k);
  return FolnerProfile(d_, k, std::move(internal), std::move(b_leaves), std::move(a_leaves));
}

Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

SampleTally sample_tally(const ProfileSampler& sampler, std::size_t k, Stratum stratum, std::uint64_t n,
                         std::uint64_t seed, Exec exec) {
  std::uint64_t members = 0;
  std::uint64_t interior = 0;
  const auto body = [&](std::uint64_t i, std::uint64_t& m, std::uint64_t& in) {
    Rng rng = stream_rng(seed, i);
    const auto a = sampler.sample(k, stratum, rng).analysis();
    m += a.member;
    in += a.interior;
  };
  if (exec == Exec::serial) {
    for (std::uint64_t i = 0; i < n; ++i) body(i, members, interior);
  } else {
#pragma omp parallel for schedule(dynamic, 256) reduction(+ : members, interior)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) body(static_cast<std::uint64_t>(i), members, interior);
  }
  return {n, members, interior};
}

namespace {

std::optional<LemmaViolation> lemma_trial(const ProfileSampler& sampler, std::size_t k, std::uint64_t seed,
                                          std::uint64_t trial, bool& interior_out) {
  const std::size_t d = sampler.degree();
  Rng rng = stream_rng(seed, trial);
  const FolnerProfile g = sampler.sample(k, Stratum::member, rng);
  const Permutation a = random_alternating(d, false, rng);
  BElement b = random_belement(d, d, rng, true);
  while (b.is_identity()) b = random_belement(d, d, rng, true);

  const auto analysis = g.analysis();
  interior_out = analysis.interior;
  auto violation = [&](std::string property) {
    LemmaViolation v;
    v.trial = trial;
    v.property = std::move(property);
    v.witness = {{"k", k}, {"g", g.to_json()}, {"a", a.to_string()}, {"b", b.to_json()}};
    return v;
  };
  if (!analysis.member) return violation("sampled g is not a member of L_k");
  const auto ga = profile_mul_generator(g, a);
  if (!ga || !is_member(*ga)) return violation("ga in L_k for a in A");
  const auto gb = profile_mul_generator(g, b);
  if (gb.has_value() != analysis.interior) return violation("gb in L_k iff sigma^-1(1) in I(g)");
  if (analysis.interior && !is_interior(*gb)) return violation("g interior implies gb interior");
  return std::nullopt;
}

}  // namespace

LemmaReport lemma_suite(const ProfileSampler& sampler, std::size_t k, std::uint64_t trials, std::uint64_t seed,
                        Exec exec) {
  LemmaReport report;
  report.trials = trials;
  std::uint64_t violations = 0;
  std::uint64_t interior = 0;
  std::optional<LemmaViolation> first;
  const auto merge = [&](std::optional<LemmaViolation>&& v) {
    if (v && (!first || v->trial < first->trial)) first = std::move(v);
  };
  if (exec == Exec::serial) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      bool in = false;
      auto v = lemma_trial(sampler, k, seed, t, in);
      interior += in;
      violations += v.has_value();
      merge(std::move(v));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : violations, interior)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
      bool in = false;
      auto v = lemma_trial(sampler, k, seed, static_cast<std::uint64_t>(t), in);
      interior += in;
      violations += v.has_value();
      if (v) {
#pragma omp critical(folner_lemma_merge)
        merge(std::move(v));
      }
    }
  }
  report.violations = violations;
  report.interior_trials = interior;
  report.first = std::move(first);
  return report;
}

// ---------------------------------------------------------------------------

namespace {

struct OracleShape {
  std::vector<std::size_t> degrees;
  std::vector<std::size_t> level_size;    // vertices per depth
  std::vector<std::size_t> level_offset;  // offset of depth j in the flat array
  std::size_t vertices = 0;
};

// Classifies one flat assignment; `open` is scratch space of size `vertices`.
void classify(const OracleShape& s, const std::vector<Point>& u, std::vector<char>& open, bool& member,
              bool& interior) {
  const std::size_t k = s.degrees.size() - 1;
  member = true;
  for (std::size_t i = 0; i < s.level_size[k]; ++i) {
    const std::size_t v = s.level_offset[k] + i;
    open[v] = u[v] == 0;
  }
  for (std::size_t j = k; j-- > 0;) {
    const std::size_t deg = s.degrees[j];
    for (std::size_t i = 0; i < s.level_size[j]; ++i) {
      const std::size_t v = s.level_offset[j] + i;
      const std::size_t child = s.level_offset[j + 1] + i * deg;
      bool any = false;
      for (std::size_t t = 0; t < deg; ++t) any = any || open[child + t];
      if (!any) {
        member = false;
        interior = false;
        return;
      }
      open[v] = open[child + u[v]];
    }
  }
  interior = open[0];
}

}  // namespace

OracleCounts brute_force_counts(const std::vector<std::size_t>& degrees, Exec exec, std::uint64_t max_assignments) {
  if (degrees.empty()) throw InvalidInput("oracle needs at least one level");
  OracleShape s;
  s.degrees = degrees;
  std::size_t count = 1;
  long double total = 1;
  for (auto d : degrees) {
    if (d < 2) throw InvalidInput("oracle degrees must be >= 2");
    s.level_offset.push_back(s.vertices);
    s.level_size.push_back(count);
    s.vertices += count;
    total *= std::pow(static_cast<long double>(d), static_cast<long double>(count));
    if (total > static_cast<long double>(max_assignments)) {
      throw ResourceLimit("oracle enumeration exceeds the assignment bound");
    }
    count *= d;
  }
  std::vector<std::size_t> radix;
  for (std::size_t j = 0; j < degrees.size(); ++j) radix.insert(radix.end(), s.level_size[j], degrees[j]);
  const auto n = static_cast<std::uint64_t>(total);

  std::uint64_t members = 0;
  std::uint64_t interior = 0;
  const auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::uint64_t& m, std::uint64_t& in) {
    std::vector<Point> u(s.vertices);
    std::vector<char> open(s.vertices);
    for (std::uint64_t x = begin; x < end; ++x) {
      std::uint64_t y = x;
      for (std::size_t v = 0; v < s.vertices; ++v) {
        u[v] = static_cast<Point>(y % radix[v]);
        y /= radix[v];
      }
      bool mem = false;
      bool inner = false;
      classify(s, u, open, mem, inner);
      m += mem;
      in += inner;
    }
  };
  if (exec == Exec::serial) {
    run_range(0, n, members, interior);
  } else {
    const std::int64_t blocks = 1024;
#pragma omp parallel for schedule(dynamic) reduction(+ : members, interior)
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::uint64_t begin = n * static_cast<std::uint64_t>(b) / blocks;
      const std::uint64_t end = n * static_cast<std::uint64_t>(b + 1) / blocks;
      run_range(begin, end, members, interior);
    }
  }
  return {n, members, interior};
}

mpq_class brute_force_ratio(const std::vector<std::size_t>& degrees, Exec exec) {
  const auto c = brute_force_counts(degrees, exec);
  mpq_class q(mpz_class(static_cast<unsigned long>(c.interior)), mpz_class(static_cast<unsigned long>(c.members)));
  q.canonicalize();
  return q;
}

mpq_class brute_force_ratio(std::size_t d, std::size_t k, Exec exec) {
  return brute_force_ratio(std::vector<std::size_t>(k + 1, d), exec);
}

}  // namespace folner
