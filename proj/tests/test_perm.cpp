#include <doctest.h>

#include <array>
#include <cmath>
#include <map>

#include "folner/errors.hpp"
#include "folner/perm.hpp"

using namespace folner;

namespace {

// Independent parity oracle: count inversions.
bool inversion_even(const Permutation& p) {
  std::size_t inv = 0;
  for (Point i = 0; i < p.degree(); ++i) {
    for (Point j = i + 1; j < p.degree(); ++j) inv += p(i) > p(j);
  }
  return inv % 2 == 0;
}

}  // namespace

TEST_CASE("compose examples") {
  const auto c = Permutation::parse("(1 2 3)", 3);
  CHECK(compose(c, Permutation::parse("(1 3 2)", 3)).is_identity());
  const auto inv = Permutation::parse("(1 2)(3 4)", 4);
  CHECK(compose(inv, inv).is_identity());
  const auto p = Permutation::parse("(1 2 3)", 5);
  const auto q = Permutation::parse("(3 4 5)", 5);
  // q(p(t)) by hand: 1->2->2, 2->3->4, 3->1->1, 4->4->5, 5->5->3.
  CHECK(compose(p, q) == Permutation({1, 3, 0, 4, 2}));
  CHECK(compose(p, q).to_string() == "(1 2 4 5 3)");
  CHECK_THROWS_AS(compose(c, q), InvalidInput);
}

TEST_CASE("parity examples") {
  CHECK(parity(Permutation::parse("(1 2 3)", 3)) == Parity::even);
  CHECK(parity(Permutation::parse("(1 2)", 2)) == Parity::odd);
  CHECK(parity(Permutation::parse("(1 2 4 5 3)", 5)) == Parity::even);
}

TEST_CASE("parsing and printing") {
  CHECK(Permutation::parse("e", 4).is_identity());
  CHECK(Permutation::identity(4).to_string() == "e");
  CHECK(Permutation::parse("(1 3)(2 4 5)", 5).to_string() == "(1 3)(2 4 5)");
  CHECK_THROWS_AS(Permutation::parse("(1 1)", 3), InvalidInput);
  CHECK_THROWS_AS(Permutation::parse("(1 4)", 3), InvalidInput);
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InvalidInput);
}

TEST_CASE("group axioms on random triples") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 3 + trial % 8;
    const auto p = random_symmetric(d, false, rng);
    const auto q = random_symmetric(d, false, rng);
    const auto r = random_symmetric(d, false, rng);
    CHECK(compose(compose(p, q), r) == compose(p, compose(q, r)));
    CHECK(compose(p, Permutation::identity(d)) == p);
    CHECK(compose(Permutation::identity(d), p) == p);
    CHECK(compose(p, p.inverse()).is_identity());
    for (Point t = 0; t < d; ++t) CHECK(p.preimage(p(t)) == t);
  }
}

TEST_CASE("parity is a homomorphism") {
  for (std::size_t d = 1; d <= 5; ++d) {
    const auto all = symmetric_group(d);
    for (const auto& p : all) {
      CHECK(p.is_even() == inversion_even(p));
      for (const auto& q : all) {
        CHECK((compose(p, q).parity() == Parity::even) == (p.is_even() == q.is_even()));
      }
    }
  }
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + trial % 11;
    const auto p = random_symmetric(d, false, rng);
    const auto q = random_symmetric(d, false, rng);
    CHECK((compose(p, q).is_even()) == (p.is_even() == q.is_even()));
    CHECK(p.is_even() == inversion_even(p));
  }
}

TEST_CASE("group enumeration sizes") {
  CHECK(symmetric_group(4).size() == 24);
  CHECK(alternating_group(5).size() == 60);
  for (const auto& p : alternating_group(5)) CHECK(p.is_even());
}

TEST_CASE("random_alternating") {
  Rng rng(2024);
  std::map<Permutation, int> counts;
  const int n = 10000;
  for (int i = 0; i < n; ++i) counts[random_alternating(3, false, rng)]++;
  REQUIRE(counts.size() == 3);
  const double p = 1.0 / 3.0;
  const double se = std::sqrt(p * (1 - p) / n);
  double chi2 = 0;
  for (const auto& [perm, c] : counts) {
    CHECK(perm.is_even());
    CHECK(std::abs(c / double(n) - p) < 4 * se);
    chi2 += (c - n * p) * (c - n * p) / (n * p);
  }
  CHECK(chi2 < 13.8);  // chi-square, 2 dof, p = 0.001

  for (int i = 0; i < 200; ++i) {
    const auto q = random_alternating(6, true, rng);
    CHECK(q(0) == 0);
    CHECK(q.is_even());
  }

  Rng a(99);
  Rng b(99);
  for (int i = 0; i < 20; ++i) CHECK(random_alternating(7, false, a) == random_alternating(7, false, b));

  CHECK_THROWS_AS(random_alternating(2, false, rng), InvalidInput);
  CHECK_THROWS_AS(random_alternating(3, true, rng), InvalidInput);
}

TEST_CASE("random_alternating with fix_one is uniform on A_4 point stabilizer") {
  Rng rng(5);
  std::map<Permutation, int> counts;
  for (int i = 0; i < 6000; ++i) counts[random_alternating(4, true, rng)]++;
  CHECK(counts.size() == 3);
  for (const auto& [perm, c] : counts) CHECK(std::abs(c - 2000) < 4 * std::sqrt(6000 * (1.0 / 3) * (2.0 / 3)));
}

TEST_CASE("double_perm") {
  CHECK(double_perm(Permutation::parse("(1 2)", 2)).to_string() == "(1 2)(3 4)");
  CHECK(double_perm(Permutation::parse("(1 2 3)", 3)).to_string() == "(1 2 3)(4 5 6)");
  CHECK(double_perm(Permutation::identity(4)).is_identity());
  for (std::size_t d = 1; d <= 4; ++d) {
    const auto all = symmetric_group(d);
    for (const auto& p : all) {
      const auto dp = double_perm(p);
      CHECK(dp.degree() == 2 * d);
      CHECK(dp.is_even());
      for (Point t = 0; t < d; ++t) CHECK(dp(t) == p(t));
      for (const auto& q : all) CHECK(double_perm(compose(p, q)) == compose(dp, double_perm(q)));
    }
  }
}

TEST_CASE("commutator and order") {
  const auto x = Permutation::parse("(1 2 3)", 5);
  const auto y = Permutation::parse("(3 4 5)", 5);
  CHECK(commutator(x, y) == compose(compose(x, y), compose(x.inverse(), y.inverse())));
  CHECK(order(Permutation::parse("(1 2 3)(4 5)", 5)) == 6);
  CHECK(order(Permutation::identity(3)) == 1);
}

TEST_CASE("alternating generators generate A_n") {
  for (std::size_t n = 3; n <= 6; ++n) {
    const auto gens = alternating_generators(n, 0, n);
    std::vector<Permutation> group{Permutation::identity(n)};
    std::map<Permutation, bool> seen{{group[0], true}};
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (const auto& g : gens) {
        auto h = compose(group[i], g);
        if (seen.emplace(h, true).second) group.push_back(h);
      }
    }
    CHECK(group.size() == alternating_group(n).size());
  }
  CHECK(alternating_generators(5, 0, 2).empty());
}
