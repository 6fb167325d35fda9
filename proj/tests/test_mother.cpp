#include <doctest.h>

#include <cmath>
#include <set>

#include "folner/errors.hpp"
#include "folner/mother.hpp"

using namespace folner;

namespace {

// Checks decompose(w) = (target_word, e, ..., e) with trivial root.
bool has_slot_one_section(Alphabet& al, const GroupWord& w, const GroupWord& target) {
  auto dec = al.decompose(w);
  if (!dec->root.is_identity()) return false;
  if (!equal(al, dec->sections[0], target)) return false;
  for (std::size_t t = 1; t < dec->sections.size(); ++t) {
    if (!is_identity(al, dec->sections[t])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_generator") {
  Alphabet al(ValencySequence::constant(5));
  Rng rng(1);
  const auto sigma = random_alternating(5, false, rng);
  const auto p = portrait(al, make_generator(al, sigma), 3);
  CHECK(p.levels[0][0] == sigma);
  for (std::size_t j = 1; j < 3; ++j) {
    for (const auto& l : p.levels[j]) CHECK(l.is_identity());
  }
  CHECK(is_identity(al, b_word(al, BElement::identity(5))));
  const auto b = b_word(al, random_belement(5, 5, rng));
  for (std::size_t n = 1; n < 6; ++n) {
    std::vector<Point> spine(n, 0);
    CHECK(act(al, b, spine) == spine);
  }
  CHECK_THROWS_AS(make_generator(al, Permutation::parse("(1 2)", 5)), InvalidInput);
  BElement bad = BElement::identity(5);
  bad.rho = Permutation::parse("(1 2 3)", 5);
  CHECK_THROWS_AS(b_word(al, bad), InvalidInput);
  bad = BElement::identity(5);
  bad.a[2] = Permutation::parse("(1 2)", 5);
  CHECK_THROWS_AS(b_word(al, bad), InvalidInput);
}

TEST_CASE("b_product matches words") {
  Alphabet al(ValencySequence::constant(5));
  Rng rng(2);
  const auto x0 = random_belement(5, 5, rng);
  CHECK(b_product(x0, b_inverse(x0)).is_identity());
  const auto a = random_alternating(5, false, rng);
  const auto a2 = random_alternating(5, false, rng);
  CHECK(b_product(b_two(a), b_two(a2)) == b_two(compose(a, a2)));
  for (int i = 0; i < 100; ++i) {
    const auto x = random_belement(5, 5, rng);
    const auto y = random_belement(5, 5, rng);
    CHECK(is_identity(al, b_word(al, x) * b_word(al, y) * b_word(al, b_product(x, y)).inverse()));
    CHECK(is_identity(al, b_word(al, x) * b_word(al, b_inverse(x))));
  }
}

TEST_CASE("commutator_expression") {
  CHECK(commutator_expression(Permutation::identity(5)).empty());
  const auto c = Permutation::parse("(2 4 5)", 5);
  const auto e = commutator_expression(c);
  CHECK(e.size() == 1);
  CHECK(commutator(e[0].first, e[0].second) == c);
  CHECK(e[0].first.is_even());
  CHECK(e[0].second.is_even());

  // independent oracle: exhaustive search for a commutator equal to the 3-cycle.
  bool found = false;
  const auto group = alternating_group(5);
  for (const auto& x : group) {
    for (const auto& y : group) found = found || commutator(x, y) == c;
  }
  CHECK(found);

  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::size_t d = 5 + i % 4;
    const auto p = random_alternating(d, false, rng);
    const auto pairs = commutator_expression(p);
    CHECK(evaluate_commutators(pairs, d) == p);
    for (const auto& [x, y] : pairs) CHECK((x.is_even() && y.is_even()));
  }
  CHECK_THROWS_AS(commutator_expression(Permutation::parse("(1 2 3)", 4)), Unsupported);
  CHECK_THROWS_AS(commutator_expression(Permutation::parse("(1 2)", 5)), InvalidInput);
}

TEST_CASE("perfect1 witness building blocks") {
  Alphabet al(ValencySequence::constant(5));
  Perfect1Witness w(al);
  Rng rng(4);
  const auto rho = random_alternating(5, true, rng);
  CHECK(has_slot_one_section(al, w.of_b_empty(rho), b_word(al, b_empty(rho))));
  const auto x = random_alternating(5, false, rng);
  const auto y = random_alternating(5, false, rng);
  CHECK(has_slot_one_section(al, w.of_b_commutator(x, y), b_word(al, b_two(commutator(x, y)))));
  CHECK(w.tau()(0) == 0);
  CHECK(w.tau().preimage(1) == 2);
  CHECK(w.tau().is_even());
}

TEST_CASE("perfect1 witness targets") {
  Alphabet al(ValencySequence::constant(5));
  Perfect1Witness w(al);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto b = random_belement(5, 5, rng);
    CHECK(has_slot_one_section(al, w.of(b), b_word(al, b)));
    const auto a = random_alternating(5, false, rng);
    CHECK(has_slot_one_section(al, w.of(a), make_generator(al, a)));
  }
  CHECK(w.of(Permutation::identity(5)).empty());

  // embedding into other slots
  const auto b = random_belement(5, 5, rng);
  const auto h = b_word(al, b) * make_generator(al, random_alternating(5, false, rng));
  for (Point t = 0; t < 5; ++t) {
    auto dec = al.decompose(w.embed(t, h));
    CHECK(dec->root.is_identity());
    for (Point s = 0; s < 5; ++s) CHECK(equal(al, dec->sections[s], s == t ? h : al.identity()));
  }

  Alphabet small(ValencySequence::constant(4));
  CHECK_THROWS_AS(Perfect1Witness{small}, Unsupported);
}

TEST_CASE("perfect1 witness at d = 6") {
  Alphabet al(ValencySequence::constant(6));
  Rng rng(6);
  for (int i = 0; i < 5; ++i) {
    const auto b = random_belement(6, 6, rng);
    CHECK(has_slot_one_section(al, perfect1_witness(al, b), b_word(al, b)));
  }
}

TEST_CASE("double_embed") {
  Alphabet al(ValencySequence::constant(3));
  CHECK(double_embed(al, al.identity(), 3).is_trivial());
  const auto sigma = Permutation::parse("(1 2)", 3);
  const auto root = al.rooted(sigma);
  auto p = double_embed(al, root, 2);
  CHECK(p.levels[0][0] == double_perm(sigma));
  for (const auto& l : p.levels[1]) CHECK(l.is_identity());
  CHECK(p.degrees == std::vector<std::size_t>{6, 6});

  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto spec = random_directed(al.valencies(), 0, 1, rng, false);
    const auto h = al.directed(spec);
    const auto img = double_embed(al, h, 4);
    CHECK(img.is_directed());
    CHECK(img.all_even());
  }
}

TEST_CASE("saturated_closure") {
  Rng rng(8);
  // Diagonal H = A_5 wr A_4 in G_5: generated by constant b-elements.
  const auto v5 = ValencySequence::constant(5);
  std::vector<DirectedSpec> gens;
  for (int i = 0; i < 3; ++i) gens.push_back(DirectedSpec::constant(random_belement(5, 5, rng)));
  auto sat = saturated_closure(v5, gens);
  CHECK(sat.classes.size() == 1);
  CHECK(sat.closure_order() == mpz_class(60) * 60 * 60 * 60 * 12);
  for (const auto& g : gens) CHECK(sat.contains(g));

  const auto v56 = ValencySequence::periodic({}, {5, 6});
  std::vector<DirectedSpec> g2;
  for (int i = 0; i < 2; ++i) g2.push_back(random_directed(v56, 0, 2, rng, true));
  auto sat2 = saturated_closure(v56, g2);
  CHECK(sat2.classes.size() <= 2);
  CHECK(sat2.classes.size() >= 1);
  for (std::size_t i = 0; i < 10; ++i) CHECK(sat2.classes[sat2.class_of(i)].degree == v56(i));
  for (const auto& g : g2) CHECK(sat2.contains(g));

  // Idempotence: the closure generators reproduce the same level types.
  const auto full = sat2.closure_generators();
  auto again = saturated_closure(v56, full);
  CHECK(again.classes.size() == sat2.classes.size());
  CHECK(again.closure_order() == sat2.closure_order());
  for (const auto& g : full) CHECK(sat2.contains(g));

  CHECK_THROWS_AS(saturated_closure(ValencySequence::formula("sqrt-log"), {}), InvalidInput);
}

TEST_CASE("level permutations of the generators") {
  // j = 1: a(sigma) -> sigma, b -> rho.
  Alphabet al(ValencySequence::constant(6));
  Rng rng(9);
  const auto sigma = random_alternating(6, false, rng);
  CHECK(level_permutation(al, make_generator(al, sigma), 1) == sigma);
  const auto b = random_belement(6, 6, rng);
  CHECK(level_permutation(al, b_word(al, b), 1) == b.rho);

  for (std::size_t j = 1; j <= 2; ++j) {
    const auto gens = stabilizer_quotient_generators(6, j);
    for (const auto& g : gens) CHECK(g.is_even());
    CHECK(orbit(gens, 0).size() == static_cast<std::size_t>(std::pow(6, j)));
    const auto tau = find_tau(gens);
    REQUIRE(tau.has_value());
    CHECK((*tau)(0) == 0);
    CHECK(tau->preimage(1) > 1);
  }
  CHECK_THROWS_AS(stabilizer_quotient_generators(5, 1), Unsupported);
  CHECK_THROWS_AS(stabilizer_quotient_generators(6, 4, 1000), ResourceLimit);
}

TEST_CASE("generator tables") {
  Alphabet al(ValencySequence::constant(5));
  const auto table = nlohmann::json::parse(R"J({
    "valency": {"constant": 5},
    "rooted": {"x": "(1 2 3)", "y": "(1 2 3 4 5)"},
    "directed": {"b": {"period": [{"a": ["(1 2 3)", "e", "e", "e"], "rho": "(2 3 4)"}]}}
  })J");
  load_generator_table(al, table);
  const auto w = al.parse("x b y^-1 b^-1");
  CHECK(w.size() == 4);
  CHECK(al.format(w) == "x b y^-1 b^-1");
  auto bad = table;
  bad["rooted"]["z"] = "(1 2)";
  Alphabet al2(ValencySequence::constant(5));
  CHECK_THROWS_AS(load_generator_table(al2, bad), InvalidInput);
}
