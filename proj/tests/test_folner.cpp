#include <doctest.h>

#include <cmath>

#include "folner/errors.hpp"
#include "folner/folner.hpp"

using namespace folner;

namespace {

// Reference recursion written directly from 1 - delta' = (1 - delta) / (1 - delta^d).
std::vector<mpq_class> reference_deltas(std::size_t d, std::size_t k_max) {
  std::vector<mpq_class> out{mpq_class(d - 1, d)};
  for (std::size_t k = 0; k < k_max; ++k) {
    mpq_class p = 1;
    for (std::size_t i = 0; i < d; ++i) p *= out.back();
    mpq_class next = 1 - (1 - out.back()) / (1 - p);
    next.canonicalize();
    out.push_back(next);
  }
  return out;
}

DirectionTree toy(std::vector<std::vector<Point>> u) {
  DirectionTree t;
  t.degrees.assign(u.size(), 2);
  t.u = std::move(u);
  return t;
}

FolnerProfile all_open(std::size_t d, std::size_t k) {
  std::vector<std::vector<Permutation>> internal;
  std::size_t count = 1;
  for (std::size_t j = 0; j <= k; ++j) {
    internal.emplace_back(count, Permutation::identity(d));
    if (j < k) count *= d;
  }
  return FolnerProfile(d, k, internal, std::vector<BElement>(count, BElement::identity(d)),
                       std::vector<Permutation>(count * (d - 1), Permutation::identity(d)));
}

}  // namespace

TEST_CASE("delta sequence") {
  const auto s5 = delta_sequence(5, 8);
  CHECK(s5.exact[0] == mpq_class(4, 5));
  CHECK(s5.exact[1] == mpq_class(1476, 2101));
  const auto ref = reference_deltas(5, 6);
  for (std::size_t k = 0; k <= 6; ++k) CHECK(s5.exact[k] == ref[k]);
  for (std::size_t k = 0; k + 1 < s5.size(); ++k) CHECK(s5.values[k] > s5.values[k + 1]);

  const auto s2 = delta_sequence(2, 20);
  for (std::size_t k = 0; k <= 20; ++k) CHECK(s2.exact[k] == mpq_class(1, k + 2));

  const auto r3 = reference_deltas(3, 10);
  const auto s3 = delta_sequence(3, 10);
  for (std::size_t k = 0; k <= 10; ++k) CHECK(s3.exact[k] == r3[k]);

  // float tail continues smoothly from the exact prefix
  const auto cut = delta_sequence(5, 30, ExactPolicy{4, 1 << 20});
  CHECK(cut.exact.size() == 5);
  const auto full = delta_sequence(5, 30, ExactPolicy{64, 1 << 12});
  const auto floats = delta_sequence(5, 30, ExactPolicy::floats_only());
  CHECK(floats.exact.empty());
  for (std::size_t k = 0; k <= 30; ++k) {
    CHECK(cut.values[k] == doctest::Approx(full.values[k]).epsilon(1e-12));
    CHECK(floats.values[k] == doctest::Approx(full.values[k]).epsilon(1e-12));
    CHECK(full.values[k] > 0);
    CHECK(full.values[k] < 1);
  }
  CHECK_THROWS_AS(delta_sequence(1, 3), InvalidInput);
}

TEST_CASE("cardinalities") {
  const auto c = cardinalities(5, 5);
  CHECK(c[0].total() == mpz_class(12) * [] {
    mpz_class x;
    mpz_ui_pow_ui(x.get_mpz_t(), 60, 9);
    return x;
  }());
  mpq_class r0(c[0].interior, c[0].total());
  r0.canonicalize();
  CHECK(r0 == mpq_class(1, 5));
  const auto ref = reference_deltas(5, 5);
  for (std::size_t k = 0; k <= 5; ++k) {
    mpq_class ratio(c[k].interior, c[k].total());
    ratio.canonicalize();
    CHECK(ratio == 1 - ref[k]);
    mpz_class lower;
    mpz_ui_pow_ui(lower.get_mpz_t(), 2, 1ul << k);
    CHECK(c[k].total() >= lower);
    CHECK(c[k].total() <= cardinality_upper_bound(5, k));
  }
  CHECK(cardinality_upper_bound(5, 0) == c[0].total());

  const auto c3 = cardinalities(3, 6);
  const auto r3 = reference_deltas(3, 6);
  for (std::size_t k = 0; k <= 6; ++k) {
    mpq_class ratio(c3[k].interior, c3[k].total());
    ratio.canonicalize();
    CHECK(ratio == 1 - r3[k]);
  }
  CHECK_THROWS_AS(cardinalities(5, 12, 4096), ResourceLimit);
  CHECK_THROWS_AS(cardinalities(2, 1), InvalidInput);
}

TEST_CASE("folner function bound") {
  const auto one = folner_function_bound(5, 1);
  CHECK(one.k_star == 0);
  REQUIRE(one.size.has_value());
  CHECK(*one.size == cardinalities(5, 0)[0].total());
  for (std::size_t n = 1; n <= 30; ++n) {
    CHECK(folner_function_bound(2, n).k_star == (n > 2 ? n - 2 : 0));
  }
  // float reference for the threshold crossing
  const auto b = folner_function_bound(5, 5);
  double x = 0.8;
  std::size_t k = 0;
  while (x > 0.2) {
    x = 1 - (1 - x) / (1 - std::pow(x, 5));
    ++k;
  }
  CHECK(b.k_star == k);
  REQUIRE(b.log2log2_size.has_value());
  CHECK(*b.log2log2_size >= static_cast<double>(b.k_star));
  CHECK_FALSE(b.size.has_value());

  const auto small = folner_function_bound(5, 2);
  CHECK(small.k_star > 0);
  const auto ref = reference_deltas(5, small.k_star);
  CHECK(ref[small.k_star] <= mpq_class(1, 2));
  CHECK(ref[small.k_star - 1] > mpq_class(1, 2));
  REQUIRE(small.size.has_value());
  CHECK(*small.size == cardinalities(5, small.k_star).back().total());
  const double exact = std::log2(static_cast<double>(mpz_sizeinbase(small.size->get_mpz_t(), 2)));
  CHECK(*small.log2log2_size == doctest::Approx(exact).epsilon(1e-3));
}

TEST_CASE("membership on direction trees") {
  // d = 2, k = 1; zero-based u values
  CHECK_FALSE(analyze(toy({{0}, {1, 1}})).member);
  CHECK_FALSE(analyze(toy({{1}, {1, 1}})).member);
  const auto a = analyze(toy({{0}, {1, 0}}));
  CHECK(a.member);
  CHECK_FALSE(a.interior);
  const auto b = analyze(toy({{1}, {0, 0}}));
  CHECK(b.member);
  CHECK(b.interior);
  CHECK(b.open_sets[0][0] == 3);

  const auto p = all_open(5, 2);
  CHECK(is_member(p));
  CHECK(is_interior(p));
  CHECK(spine(p) == std::vector<Point>{0, 0, 0});

  auto q = p;
  // closing the first grandchild closes the root's chosen child
  q.sigma(2, 0) = Permutation::parse("(1 2 3)", 5);
  CHECK(is_member(q));
  CHECK_FALSE(is_interior(q));
  // depth-1 vertex 1 loses every open child
  for (std::size_t i = 5; i < 10; ++i) q.sigma(2, i) = Permutation::parse("(1 2 3)", 5);
  CHECK_FALSE(is_member(q));
  CHECK_THROWS_AS(is_interior(q), InvalidInput);

  CHECK_THROWS_AS(FolnerProfile(5, 0, {{Permutation::parse("(1 2)", 5)}}, {BElement::identity(5)},
                                std::vector<Permutation>(4, Permutation::identity(5))),
                  InvalidInput);
}

TEST_CASE("brute-force oracle") {
  const auto c = brute_force_counts({2, 2}, Exec::serial);
  CHECK(c.assignments == 8);
  CHECK(c.members == 6);
  CHECK(c.interior == 4);
  CHECK(brute_force_ratio(2, 1) == mpq_class(2, 3));
  CHECK(brute_force_ratio(2, 2) == mpq_class(3, 4));
  CHECK(brute_force_ratio(3, 1) == mpq_class(9, 19));
  for (const auto& [d, k] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    CHECK(brute_force_ratio(d, k) == 1 - reference_deltas(d, k)[k]);
    CHECK(brute_force_counts(std::vector<std::size_t>(k + 1, d), Exec::serial) ==
          brute_force_counts(std::vector<std::size_t>(k + 1, d), Exec::parallel));
  }
  CHECK_THROWS_AS(brute_force_counts({5, 5, 5}), ResourceLimit);
}

TEST_CASE("profile json round trip") {
  ProfileSampler sampler(5, 2);
  Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    const auto p = sampler.sample(static_cast<std::size_t>(i % 3), Stratum::member, rng);
    CHECK(FolnerProfile::from_json(p.to_json(), 5) == p);
  }
}

TEST_CASE("sampler contracts") {
  ProfileSampler sampler(5, 3);
  Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = static_cast<std::size_t>(i % 4);
    const auto m = sampler.sample(k, Stratum::member, rng);
    CHECK(is_member(m));
    const auto in = sampler.sample(k, Stratum::interior, rng);
    CHECK(is_interior(in));
    const auto bd = sampler.sample(k, Stratum::boundary, rng);
    CHECK(is_member(bd));
    CHECK_FALSE(is_interior(bd));
  }
  Rng r1 = stream_rng(5, 7);
  Rng r2 = stream_rng(5, 7);
  CHECK(sampler.sample(2, Stratum::member, r1) == sampler.sample(2, Stratum::member, r2));
  CHECK(sample_tally(sampler, 2, Stratum::member, 2000, 9, Exec::serial) ==
        sample_tally(sampler, 2, Stratum::member, 2000, 9, Exec::parallel));
}

TEST_CASE("sampler calibration") {
  ProfileSampler sampler(5, 2);
  const auto ref = reference_deltas(5, 2);
  for (std::size_t k = 1; k <= 2; ++k) {
    const auto t = sample_tally(sampler, k, Stratum::member, 100000, 2024);
    CHECK(t.members == t.samples);
    const double p = mpq_class(1 - ref[k]).get_d();
    const double se = std::sqrt(p * (1 - p) / t.samples);
    CHECK(std::abs(static_cast<double>(t.interior) / t.samples - p) < 4 * se);
  }
}

TEST_CASE("generator action on profiles") {
  ProfileSampler sampler(5, 2);
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto g = sampler.sample(static_cast<std::size_t>(i % 3), Stratum::member, rng);
    const auto a = random_alternating(5, false, rng);
    CHECK(profile_mul_generator(g, a).has_value());
  }
  const auto report = lemma_suite(sampler, 2, 2000, 77);
  CHECK(report.violations == 0);
  CHECK(report.interior_trials > 0);
  CHECK(report.interior_trials < report.trials);
  const auto serial = lemma_suite(sampler, 2, 500, 77, Exec::serial);
  const auto parallel = lemma_suite(sampler, 2, 500, 77, Exec::parallel);
  CHECK(serial.interior_trials == parallel.interior_trials);

  // a boundary g has some b pushing it out
  Rng r(14);
  const auto bd = sampler.sample(1, Stratum::boundary, r);
  BElement b = random_belement(5, 5, r);
  while (b.is_identity()) b = random_belement(5, 5, r);
  CHECK_FALSE(profile_mul_generator(bd, b).has_value());
}

TEST_CASE("recognize_word examples") {
  Alphabet al(ValencySequence::constant(5));
  Rng rng(15);
  for (int i = 0; i < 20; ++i) {
    const auto sigma = random_alternating(5, false, rng);
    const auto p = recognize_word(al, make_generator(al, sigma), 0);
    REQUIRE(p.has_value());
    CHECK(is_interior(*p) == (sigma.preimage(0) == 0));
  }
  for (int i = 0; i < 10; ++i) {
    const auto b = random_belement(5, 5, rng);
    const auto p = recognize_word(al, b_word(al, b), 0);
    REQUIRE(p.has_value());
    CHECK(is_interior(*p));
    CHECK(p->b_leaf(0) == b);
  }
  int tried = 0;
  while (tried < 10) {
    const auto sigma = random_alternating(5, false, rng);
    const auto b = random_belement(5, 5, rng);
    if (sigma.preimage(0) == 0 || b.is_identity()) continue;
    ++tried;
    CHECK_FALSE(recognize_word(al, make_generator(al, sigma) * b_word(al, b), 0).has_value());
  }
}

TEST_CASE("profiles and words agree") {
  Alphabet al(ValencySequence::constant(5));
  Perfect1Witness wit(al);
  ProfileSampler sampler(5, 1);
  Rng rng(16);
  int interior = 0;
  for (int i = 0; i < 100; ++i) {
    const auto p = sampler.sample(1, i % 2 ? Stratum::interior : Stratum::boundary, rng);
    const auto w = profile_word(wit, p);
    const auto back = recognize_word(al, w, 1);
    REQUIRE(back.has_value());
    CHECK(*back == p);
    CHECK(is_interior(*back) == is_interior(p));
    interior += is_interior(p);
    const auto sp = spine(p);
    CHECK(act(al, w, sp) == std::vector<Point>(sp.size(), 0));
    if (i % 10 == 0) {
      // the combinatorial product rules agree with the group law
      BElement b = random_belement(5, 5, rng);
      const auto gb = profile_mul_generator(p, b);
      const auto rec = recognize_word(al, w * b_word(al, b), 1);
      CHECK(gb.has_value() == rec.has_value());
      if (gb && rec) CHECK(*gb == *rec);
      const auto a = random_alternating(5, false, rng);
      CHECK(*profile_mul_generator(p, a) == *recognize_word(al, w * make_generator(al, a), 1));
    }
    al.clear_memo();
  }
  CHECK(interior == 50);
}

TEST_CASE("rational to double rounding") {
  CHECK(to_double(mpq_class(4, 5)) == 0.8);
  CHECK(to_double(mpq_class(1, 3)) == 1.0 / 3);
  CHECK(to_double(mpq_class(-2, 7)) == -2.0 / 7);
  CHECK(to_double(mpq_class(0)) == 0.0);
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const auto a = static_cast<long>(rng() >> 40) + 1;
    const auto b = static_cast<long>(rng() >> 40) + 1;
    mpq_class q(a, b);
    q.canonicalize();
    // both operands are exact in double, so IEEE division is the correctly rounded reference
    CHECK(to_double(q) == static_cast<double>(a) / static_cast<double>(b));
  }
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 3, 500);
  mpq_class huge(big, big + 1);
  huge.canonicalize();
  CHECK(to_double(huge) == 1.0);
}
