#include "folner/perm.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "folner/errors.hpp"

namespace folner {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x]) {
      throw InvalidInput("permutation images are not a bijection");
    }
    seen[x] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<Point> img(degree);
  std::iota(img.begin(), img.end(), Point{0});
  Permutation p;
  p.images_ = std::move(img);
  return p;
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> img(degree);
  std::iota(img.begin(), img.end(), Point{0});
  std::vector<bool> used(degree, false);
  for (const auto& cyc : cycles) {
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      Point x = cyc[i];
      if (x >= degree || used[x]) throw InvalidInput("cycles are not disjoint or out of range");
      used[x] = true;
      img[x] = cyc[(i + 1) % cyc.size()];
    }
  }
  return Permutation(std::move(img));
}

Permutation Permutation::parse(std::string_view text, std::size_t degree) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i < text.size() && text[i] == 'e') {
    ++i;
    skip_ws();
    if (i != text.size()) throw InvalidInput("trailing characters after identity");
    return identity(degree);
  }
  std::vector<std::vector<Point>> cycles;
  while (true) {
    skip_ws();
    if (i == text.size()) break;
    if (text[i] != '(') throw InvalidInput("expected '(' in cycle notation: " + std::string(text));
    ++i;
    std::vector<Point> cyc;
    while (true) {
      skip_ws();
      if (i >= text.size()) throw InvalidInput("unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (text[i] == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw InvalidInput("unexpected character in cycle notation");
      }
      std::size_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<std::size_t>(text[i] - '0');
        ++i;
      }
      if (value < 1 || value > degree) throw InvalidInput("point out of range in cycle notation");
      cyc.push_back(static_cast<Point>(value - 1));
    }
    if (!cyc.empty()) cycles.push_back(std::move(cyc));
  }
  return from_cycles(degree, cycles);
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Parity Permutation::parity() const {
  std::vector<bool> seen(images_.size(), false);
  std::size_t transpositions = 0;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0 ? Parity::even : Parity::odd;
}

Permutation Permutation::inverse() const {
  std::vector<Point> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
  Permutation p;
  p.images_ = std::move(inv);
  return p;
}

Point Permutation::preimage(Point t) const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] == t) return static_cast<Point>(i);
  }
  throw InvalidInput("point out of range");
}

std::string Permutation::to_string() const {
  std::ostringstream out;
  std::vector<bool> seen(images_.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    out << '(';
    bool first = true;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      if (!first) out << ' ';
      out << j + 1;
      first = false;
    }
    out << ')';
    any = true;
  }
  return any ? out.str() : "e";
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw InvalidInput("degree mismatch in compose");
  std::vector<Point> img(p.degree());
  for (std::size_t t = 0; t < img.size(); ++t) img[t] = q(p(static_cast<Point>(t)));
  return Permutation(std::move(img));
}

Permutation commutator(const Permutation& x, const Permutation& y) {
  return x * y * x.inverse() * y.inverse();
}

namespace {

// `odd` receives the parity of the result.
std::vector<Point> shuffled(std::size_t d, bool fix_one, Rng& rng, bool* odd = nullptr) {
  std::vector<Point> img(d);
  std::iota(img.begin(), img.end(), Point{0});
  const std::size_t first = fix_one ? 1 : 0;
  bool parity = false;
  // Fisher-Yates on positions [first, d).
  for (std::size_t i = d; i > first + 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(first, i - 1);
    const std::size_t j = pick(rng);
    if (j != i - 1) {
      std::swap(img[i - 1], img[j]);
      parity = !parity;
    }
  }
  if (odd) *odd = parity;
  return img;
}

}  // namespace

Permutation random_symmetric(std::size_t d, bool fix_one, Rng& rng) {
  if (d == 0) throw InvalidInput("degree must be positive");
  return Permutation(shuffled(d, fix_one, rng));
}

Permutation random_alternating(std::size_t d, bool fix_one, Rng& rng) {
  if (d < 3 || (fix_one && d < 4)) throw InvalidInput("degree too small for a nontrivial alternating sample");
  bool odd = false;
  std::vector<Point> img = shuffled(d, fix_one, rng, &odd);
  if (odd) {
    // Right coset swap: exchanging two images flips parity and is a bijection odd <-> even.
    const std::size_t i = fix_one ? 1 : 0;
    std::swap(img[i], img[i + 1]);
  }
  return Permutation(std::move(img));
}

Permutation double_perm(const Permutation& p) {
  const std::size_t d = p.degree();
  std::vector<Point> img(2 * d);
  for (std::size_t t = 0; t < d; ++t) {
    img[t] = p(static_cast<Point>(t));
    img[t + d] = static_cast<Point>(p(static_cast<Point>(t)) + d);
  }
  return Permutation(std::move(img));
}

std::vector<Permutation> symmetric_group(std::size_t d) {
  std::vector<Point> img(d);
  std::iota(img.begin(), img.end(), Point{0});
  std::vector<Permutation> out;
  do {
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

std::vector<Permutation> alternating_group(std::size_t d) {
  std::vector<Permutation> out;
  for (auto& p : symmetric_group(d)) {
    if (p.is_even()) out.push_back(std::move(p));
  }
  return out;
}

std::vector<Permutation> alternating_generators(std::size_t degree, std::size_t offset, std::size_t n) {
  if (n < 3) return {};
  if (offset + n > degree) throw InvalidInput("generator support exceeds degree");
  auto pt = [&](std::size_t i) { return static_cast<Point>(offset + i); };
  std::vector<Permutation> gens;
  gens.push_back(Permutation::from_cycles(degree, {{pt(0), pt(1), pt(2)}}));
  if (n > 3) {
    // A_n = <(1 2 3), (1 2 ... n)> for n odd, <(1 2 3), (2 3 ... n)> for n even.
    std::vector<Point> cyc;
    for (std::size_t i = (n % 2 == 1 ? 0 : 1); i < n; ++i) cyc.push_back(pt(i));
    gens.push_back(Permutation::from_cycles(degree, {cyc}));
  }
  return gens;
}

std::uint64_t order(const Permutation& p) {
  std::vector<bool> seen(p.degree(), false);
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < p.degree(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p(static_cast<Point>(j))) {
      seen[j] = true;
      ++len;
    }
    result = std::lcm(result, len);
  }
  return result;
}

}  // namespace folner
