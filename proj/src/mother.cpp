#include "folner/mother.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "folner/errors.hpp"

namespace folner {

GroupWord make_generator(Alphabet& alphabet, const Permutation& sigma, std::size_t level) {
  if (!sigma.is_even()) throw InvalidInput("rooted generator must be even: " + sigma.to_string());
  return alphabet.rooted(sigma, level);
}

GroupWord make_generator(Alphabet& alphabet, const DirectedSpec& spec, std::size_t level) {
  spec.validate(alphabet.valencies(), alphabet.canonical_level(level), true);
  return alphabet.directed(spec, level);
}

GroupWord b_word(Alphabet& alphabet, const BElement& b) {
  return make_generator(alphabet, DirectedSpec::constant(b));
}

BElement b_two(const Permutation& alpha) {
  BElement b = BElement::identity(alpha.degree());
  b.a[0] = alpha;
  return b;
}

BElement b_empty(const Permutation& rho) {
  BElement b = BElement::identity(rho.degree());
  b.rho = rho;
  return b;
}

namespace {

Permutation three_cycle(std::size_t d, Point x, Point y, Point z) {
  return Permutation::from_cycles(d, {{x, y, z}});
}

// A solution of [x, y] = (0 1 2) inside A_5, found once by exhaustive search.
const std::pair<Permutation, Permutation>& base_commutator() {
  static const std::pair<Permutation, Permutation> solution = [] {
    const auto group = alternating_group(5);
    const auto target = three_cycle(5, 0, 1, 2);
    for (const auto& x : group) {
      for (const auto& y : group) {
        if (commutator(x, y) == target) return std::make_pair(x, y);
      }
    }
    throw std::logic_error("no commutator found in A_5");
  }();
  return solution;
}

// Carries a permutation of {0..4} onto the points phi[0..4] of {0..d-1}.
Permutation relabel(const Permutation& p, const std::array<Point, 5>& phi, std::size_t d) {
  std::vector<Point> images(d);
  std::iota(images.begin(), images.end(), Point{0});
  for (Point i = 0; i < 5; ++i) images[phi[i]] = phi[p(i)];
  return Permutation(std::move(images));
}

std::vector<Permutation> as_three_cycles(const Permutation& r) {
  if (r.is_identity()) return {};
  const std::size_t d = r.degree();
  std::vector<Point> support;
  for (Point t = 0; t < d; ++t) {
    if (r(t) != t) support.push_back(t);
  }
  std::vector<Permutation> cycles;
  for (Point a : support) {
    for (Point b : support) {
      for (Point c : support) {
        if (a < b && a < c && b != c) cycles.push_back(three_cycle(d, a, b, c));
      }
    }
  }
  for (const auto& c : cycles) {
    if (c == r) return {c};
  }
  for (const auto& c1 : cycles) {
    for (const auto& c2 : cycles) {
      if (compose(c1, c2) == r) return {c1, c2};
    }
  }
  throw std::logic_error("pair of transpositions is not a product of two 3-cycles");
}

}  // namespace

std::vector<std::pair<Permutation, Permutation>> commutator_expression(const Permutation& p) {
  const std::size_t d = p.degree();
  if (d < 5) throw Unsupported("commutator expressions need d >= 5 (A_d perfect)");
  if (!p.is_even()) throw InvalidInput("commutator expression of an odd permutation");

  // p s_1 s_2 ... s_N = e, hence p = s_N ... s_1.
  std::vector<Permutation> transpositions;
  Permutation r = p;
  for (Point i = 0; i < d; ++i) {
    if (r(i) == i) continue;
    const auto s = Permutation::from_cycles(d, {{i, r(i)}});
    r = compose(r, s);
    transpositions.push_back(s);
  }
  std::reverse(transpositions.begin(), transpositions.end());

  std::vector<std::pair<Permutation, Permutation>> out;
  const auto& [bx, by] = base_commutator();
  for (std::size_t i = 0; i + 1 < transpositions.size(); i += 2) {
    for (const auto& c : as_three_cycles(compose(transpositions[i], transpositions[i + 1]))) {
      std::array<Point, 5> phi{};
      phi[0] = 0;
      while (c(phi[0]) == phi[0]) ++phi[0];
      phi[1] = c(phi[0]);
      phi[2] = c(phi[1]);
      std::size_t n = 3;
      for (Point t = 0; t < d && n < 5; ++t) {
        if (t != phi[0] && t != phi[1] && t != phi[2]) phi[n++] = t;
      }
      out.emplace_back(relabel(bx, phi, d), relabel(by, phi, d));
    }
  }
  return out;
}

Permutation evaluate_commutators(const std::vector<std::pair<Permutation, Permutation>>& pairs,
                                 std::size_t degree) {
  Permutation out = Permutation::identity(degree);
  for (const auto& [x, y] : pairs) out = compose(out, commutator(x, y));
  return out;
}

// ---------------------------------------------------------------------------

Perfect1Witness::Perfect1Witness(Alphabet& alphabet) : alphabet_(alphabet) {
  if (!alphabet.valencies().is_constant()) throw InvalidInput("witnesses live in G_d with constant valency");
  d_ = alphabet.degree(0);
  if (d_ < 5) throw Unsupported("perfect1_witness needs d >= 5");
  tau_ = three_cycle(d_, 2, 1, 3);
  tau_prime_ = three_cycle(d_, 0, 1, 2);
}

GroupWord Perfect1Witness::of_b_empty(const Permutation& rho) {
  return b_word(alphabet_, b_empty(rho)) * make_generator(alphabet_, rho.inverse());
}

GroupWord Perfect1Witness::of_b_commutator(const Permutation& x, const Permutation& y) {
  const GroupWord bx = b_word(alphabet_, b_two(x));
  const GroupWord t = make_generator(alphabet_, tau_);
  const GroupWord conj = t * b_word(alphabet_, b_two(y)) * t.inverse();
  return bx * conj * bx.inverse() * conj.inverse();
}

GroupWord Perfect1Witness::of(const BElement& target) {
  target.validate(true);
  if (target.degree() != d_ || target.child_degree() != d_) throw InvalidInput("target degree mismatch");
  std::lock_guard lock(mutex_);
  if (auto it = b_cache_.find(target); it != b_cache_.end()) return it->second;

  auto of_two = [&](const Permutation& alpha) {
    auto it = b_two_cache_.find(alpha);
    if (it != b_two_cache_.end()) return it->second;
    GroupWord w = alphabet_.identity();
    for (const auto& [x, y] : commutator_expression(alpha)) w *= of_b_commutator(x, y);
    b_two_cache_.emplace(alpha, w);
    return w;
  };

  GroupWord w = alphabet_.identity();
  for (Point t = 1; t < d_; ++t) {
    const Permutation& alpha = target.at(t);
    if (alpha.is_identity()) continue;
    if (t == 1) {
      w *= of_two(alpha);
      continue;
    }
    Point s = 2;
    while (s == t) ++s;
    // pi fixes 0 and sends t to 1, so b_empty(pi) b_two(alpha) b_empty(pi)^-1 carries alpha at slot t.
    const GroupWord pi = of_b_empty(three_cycle(d_, t, 1, s));
    w *= pi * of_two(alpha) * pi.inverse();
  }
  if (!target.rho.is_identity()) w *= of_b_empty(target.rho);
  w = alphabet_.reduce(w);
  b_cache_.emplace(target, w);
  return w;
}

GroupWord Perfect1Witness::of(const Permutation& target) {
  if (target.degree() != d_ || !target.is_even()) throw InvalidInput("target must be an even permutation of degree d");
  std::lock_guard lock(mutex_);
  if (auto it = rooted_cache_.find(target); it != rooted_cache_.end()) return it->second;
  GroupWord w = alphabet_.identity();
  if (!target.is_identity()) {
    // W(b_two)^-1 b_two has sections (e, a(target), e, ...); tau' moves slot 2 to slot 1.
    const GroupWord t = make_generator(alphabet_, tau_prime_);
    w = t * of(b_two(target)).inverse() * b_word(alphabet_, b_two(target)) * t.inverse();
    w = alphabet_.reduce(w);
  }
  rooted_cache_.emplace(target, w);
  return w;
}

GroupWord Perfect1Witness::image(const GroupWord& w) {
  GroupWord out = alphabet_.identity();
  for (const auto& l : w.letters()) {
    const Symbol s = alphabet_.symbol(l.symbol);
    GroupWord piece;
    if (s.kind == SymbolKind::rooted) {
      piece = of(s.root);
    } else {
      if (!s.spec.prefix().empty() || s.spec.period().size() != 1) {
        throw InvalidInput("witness images need constant directed letters");
      }
      piece = of(s.spec.level(0));
    }
    out *= l.inverse ? piece.inverse() : piece;
  }
  return out;
}

GroupWord Perfect1Witness::embed(Point slot, const GroupWord& h) {
  if (slot >= d_) throw InvalidInput("slot out of range");
  const GroupWord inner = image(h);
  if (slot == 0) return inner;
  Point s = 1;
  while (s == slot) ++s;
  const GroupWord pi = make_generator(alphabet_, three_cycle(d_, slot, 0, s));
  return pi * inner * pi.inverse();
}

GroupWord perfect1_witness(Alphabet& alphabet, const BElement& target) {
  return Perfect1Witness(alphabet).of(target);
}

GroupWord perfect1_witness(Alphabet& alphabet, const Permutation& target) {
  return Perfect1Witness(alphabet).of(target);
}

// ---------------------------------------------------------------------------

Portrait double_embed(Alphabet& alphabet, const GroupWord& w, std::size_t depth) {
  const Portrait src = portrait(alphabet, w, depth);
  Portrait out;
  for (auto d : src.degrees) out.degrees.push_back(2 * d);
  std::size_t count = 1;
  for (std::size_t j = 0; j < depth; ++j) {
    std::vector<Permutation> labels;
    labels.reserve(count);
    const std::span<const std::size_t> dst_degs(out.degrees.data(), j);
    const std::span<const std::size_t> src_degs(src.degrees.data(), j);
    for (std::size_t idx = 0; idx < count; ++idx) {
      const auto v = vertex_address(dst_degs, j, idx);
      bool inside = true;
      for (std::size_t i = 0; i < j; ++i) inside = inside && v[i] < src.degrees[i];
      labels.push_back(inside ? double_perm(src.levels[j][vertex_index(src_degs, v)])
                              : Permutation::identity(out.degrees[j]));
    }
    out.levels.push_back(std::move(labels));
    count *= out.degrees[j];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

mpz_class alternating_order(std::size_t n) {
  if (n < 2) return 1;
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f / 2;
}

}  // namespace

std::size_t SaturationData::class_of(std::size_t level) const {
  if (level < prefix_length) return level_class[level];
  return level_class[prefix_length + (level - prefix_length) % period_length];
}

mpz_class SaturationData::closure_order() const {
  mpz_class out = 1;
  for (const auto& c : classes) {
    mpz_class a;
    mpz_pow_ui(a.get_mpz_t(), alternating_order(c.child_degree).get_mpz_t(), c.degree - 1);
    out *= a * alternating_order(c.degree - 1);
  }
  return out;
}

bool SaturationData::contains(const DirectedSpec& h) const {
  const std::size_t span = std::max(prefix_length, h.prefix().size()) + std::lcm(period_length, h.period().size());
  std::map<std::size_t, const BElement*> seen;
  for (std::size_t i = 0; i < span; ++i) {
    const BElement& x = h.level(i);
    if (!x.is_valid(true) || x.degree() != valencies(i) || x.child_degree() != valencies(i + 1)) return false;
    auto [it, inserted] = seen.emplace(class_of(i), &x);
    if (!inserted && *it->second != x) return false;
  }
  return true;
}

std::vector<DirectedSpec> SaturationData::closure_generators() const {
  std::vector<DirectedSpec> out;
  for (std::size_t s = 0; s < classes.size(); ++s) {
    const std::size_t d = classes[s].degree;
    const std::size_t dc = classes[s].child_degree;
    std::vector<BElement> local;
    for (const auto& alpha : alternating_generators(dc, 0, dc)) {
      for (Point t = 1; t < d; ++t) {
        BElement b = BElement::identity(d, dc);
        b.a[t - 1] = alpha;
        local.push_back(b);
      }
    }
    for (const auto& rho : alternating_generators(d, 1, d - 1)) {
      BElement b = BElement::identity(d, dc);
      b.rho = rho;
      local.push_back(b);
    }
    for (const auto& gen : local) {
      std::vector<BElement> prefix;
      std::vector<BElement> period;
      for (std::size_t i = 0; i < prefix_length + period_length; ++i) {
        BElement x = class_of(i) == s ? gen : BElement::identity(valencies(i), valencies(i + 1));
        (i < prefix_length ? prefix : period).push_back(std::move(x));
      }
      out.emplace_back(std::move(prefix), std::move(period));
    }
  }
  return out;
}

SaturationData saturated_closure(const ValencySequence& valencies, const std::vector<DirectedSpec>& gens) {
  if (!valencies.eventually_periodic()) throw InvalidInput("saturation needs an eventually periodic valency description");
  SaturationData out;
  out.valencies = valencies;
  out.prefix_length = valencies.prefix().size();
  out.period_length = valencies.period().size();
  for (const auto& g : gens) {
    out.prefix_length = std::max(out.prefix_length, g.prefix().size());
    out.period_length = std::lcm(out.period_length, g.period().size());
  }
  for (const auto& g : gens) g.validate(valencies, 0, true);
  for (std::size_t i = 0; i < out.prefix_length + out.period_length; ++i) {
    SaturationClass c{valencies(i), valencies(i + 1), {}};
    for (const auto& g : gens) c.marked.push_back(g.level(i));
    auto it = std::find(out.classes.begin(), out.classes.end(), c);
    out.level_class.push_back(static_cast<std::size_t>(it - out.classes.begin()));
    if (it == out.classes.end()) out.classes.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<Permutation> generator_level_permutations(std::size_t d, std::size_t j, std::size_t max_points) {
  if (d < 3) throw InvalidInput("the mother group needs d >= 3");
  Alphabet alphabet(ValencySequence::constant(d));
  alphabet.max_level_points = max_points;
  std::vector<Permutation> out;
  const auto group = alternating_group(d);
  for (const auto& sigma : group) {
    if (!sigma.is_identity()) out.push_back(level_permutation(alphabet, make_generator(alphabet, sigma), j));
  }
  for (const auto& alpha : group) {
    if (!alpha.is_identity()) out.push_back(level_permutation(alphabet, b_word(alphabet, b_two(alpha)), j));
  }
  for (const auto& rho : group) {
    if (rho(0) == 0 && !rho.is_identity()) {
      out.push_back(level_permutation(alphabet, b_word(alphabet, b_empty(rho)), j));
    }
  }
  return out;
}

std::vector<Permutation> stabilizer_quotient_generators(std::size_t d, std::size_t j, std::size_t max_points) {
  if (d < 6) throw Unsupported("stabilizer quotients need d >= 6 (A and B perfect)");
  return generator_level_permutations(d, j, max_points);
}

std::optional<Permutation> find_tau(const std::vector<Permutation>& gens) {
  auto good = [](const Permutation& p) { return p.degree() > 2 && p(0) == 0 && p.preimage(1) > 1; };
  for (const auto& g : gens) {
    if (good(g)) return g;
  }
  for (const auto& g : gens) {
    for (const auto& h : gens) {
      auto p = compose(g, h);
      if (good(p)) return p;
    }
  }
  return std::nullopt;
}

std::vector<Point> orbit(const std::vector<Permutation>& gens, Point start) {
  if (gens.empty()) return {start};
  std::vector<bool> seen(gens.front().degree(), false);
  std::vector<Point> out{start};
  seen.at(start) = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : gens) {
      const Point next = g(out[i]);
      if (!seen[next]) {
        seen[next] = true;
        out.push_back(next);
      }
    }
  }
  return out;
}

void load_generator_table(Alphabet& alphabet, const nlohmann::json& table) {
  if (table.contains("valency") && ValencySequence::from_json(table.at("valency")) != alphabet.valencies()) {
    throw InvalidInput("generator table valency does not match the alphabet");
  }
  if (table.contains("rooted")) {
    for (const auto& [name, cycles] : table.at("rooted").items()) {
      alphabet.define(name, make_generator(alphabet, Permutation::parse(cycles.get<std::string>(), alphabet.degree(0))));
    }
  }
  if (table.contains("directed")) {
    for (const auto& [name, spec] : table.at("directed").items()) {
      const GroupWord g = make_generator(alphabet, DirectedSpec::from_json(spec, alphabet.valencies(), 0));
      if (g.empty()) throw InvalidInput("directed generator is trivial: " + name);
      alphabet.define(name, g);
    }
  }
}

}  // namespace folner
