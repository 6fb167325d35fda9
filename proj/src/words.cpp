#include "folner/words.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include "folner/errors.hpp"

namespace folner {

GroupWord GroupWord::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& l : out) l.inverse = !l.inverse;
  return GroupWord(level_, std::move(out));
}

GroupWord GroupWord::pow(std::size_t n) const {
  GroupWord out(level_);
  for (std::size_t i = 0; i < n; ++i) out *= *this;
  return out;
}

GroupWord operator*(const GroupWord& x, const GroupWord& y) {
  GroupWord out = x;
  out *= y;
  return out;
}

GroupWord& GroupWord::operator*=(const GroupWord& y) {
  if (y.empty()) return *this;
  if (empty()) {
    level_ = y.level_;
  } else if (level_ != y.level_) {
    throw InvalidInput("cannot multiply words living at different levels");
  }
  letters_.insert(letters_.end(), y.letters_.begin(), y.letters_.end());
  return *this;
}

std::size_t vertex_index(std::span<const std::size_t> degrees, std::span<const Point> vertex) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < vertex.size(); ++j) {
    if (j >= degrees.size() || vertex[j] >= degrees[j]) throw InvalidInput("invalid vertex address");
    idx = idx * degrees[j] + vertex[j];
  }
  return idx;
}

std::vector<Point> vertex_address(std::span<const std::size_t> degrees, std::size_t depth, std::size_t index) {
  std::vector<Point> v(depth);
  for (std::size_t j = depth; j-- > 0;) {
    v[j] = static_cast<Point>(index % degrees[j]);
    index /= degrees[j];
  }
  return v;
}

const Permutation& Portrait::label(std::span<const Point> vertex) const {
  if (vertex.size() >= levels.size()) throw InvalidInput("vertex below portrait depth");
  return levels[vertex.size()][vertex_index(degrees, vertex)];
}

bool Portrait::is_trivial() const {
  for (const auto& lvl : levels) {
    for (const auto& p : lvl) {
      if (!p.is_identity()) return false;
    }
  }
  return true;
}

bool Portrait::all_even() const {
  for (const auto& lvl : levels) {
    for (const auto& p : lvl) {
      if (!p.is_even()) return false;
    }
  }
  return true;
}

bool Portrait::is_directed() const {
  for (std::size_t j = 0; j < levels.size(); ++j) {
    for (std::size_t idx = 0; idx < levels[j].size(); ++idx) {
      const auto v = vertex_address(degrees, j, idx);
      const bool spine = std::all_of(v.begin(), v.end(), [](Point t) { return t == 0; });
      const bool near_spine = j == 0 || std::all_of(v.begin(), v.end() - 1, [](Point t) { return t == 0; });
      const Permutation& p = levels[j][idx];
      if (spine && p(0) != 0) return false;
      if (!near_spine && !p.is_identity()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

std::size_t Alphabet::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 1469598103934665603ull ^ k.level;
  for (const auto& l : k.letters) {
    h ^= (static_cast<std::uint64_t>(l.symbol) << 1) | static_cast<std::uint64_t>(l.inverse);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Alphabet::Alphabet(ValencySequence valencies) : valencies_(std::move(valencies)) {
  if (!valencies_.eventually_periodic()) {
    throw InvalidInput("words need an eventually periodic valency sequence");
  }
}

std::uint32_t Alphabet::intern(Symbol s) {
  std::lock_guard lock(mutex_);
  const auto id = static_cast<std::uint32_t>(symbols_.size());
  if (s.kind == SymbolKind::rooted) {
    auto [it, inserted] = rooted_ids_.try_emplace({s.level, s.root}, id);
    if (!inserted) return it->second;
  } else {
    auto [it, inserted] = directed_ids_.try_emplace({s.level, s.spec}, id);
    if (!inserted) return it->second;
  }
  symbols_.push_back(std::make_unique<const Symbol>(std::move(s)));
  letter_cache_.emplace_back();
  return id;
}

GroupWord Alphabet::rooted(const Permutation& sigma, std::size_t level) {
  const std::size_t lvl = canonical_level(level);
  if (sigma.degree() != degree(lvl)) throw InvalidInput("rooted generator degree does not match valency");
  if (sigma.is_identity()) return GroupWord(lvl);
  Symbol s{SymbolKind::rooted, lvl, sigma, {}};
  return GroupWord(lvl, {Letter{intern(std::move(s)), false}});
}

GroupWord Alphabet::directed(const DirectedSpec& spec, std::size_t level) {
  const std::size_t lvl = canonical_level(level);
  spec.validate(valencies_, lvl, false);
  if (spec.is_identity()) return GroupWord(lvl);
  Symbol s{SymbolKind::directed, lvl, Permutation::identity(degree(lvl)), spec};
  return GroupWord(lvl, {Letter{intern(std::move(s)), false}});
}

Symbol Alphabet::symbol(std::uint32_t id) const {
  std::lock_guard lock(mutex_);
  return *symbols_.at(id);
}

std::size_t Alphabet::symbol_count() const {
  std::lock_guard lock(mutex_);
  return symbols_.size();
}

void Alphabet::define(const std::string& name, const GroupWord& generator) {
  if (generator.size() != 1 || generator.letters()[0].inverse) {
    throw InvalidInput("only single generators can be named: " + name);
  }
  if (name.empty() || name.find_first_of(" \t^[]") != std::string::npos) {
    throw InvalidInput("invalid generator name: " + name);
  }
  std::lock_guard lock(mutex_);
  names_[name] = generator.letters()[0].symbol;
  names_by_id_[generator.letters()[0].symbol] = name;
}

bool Alphabet::has_name(const std::string& name) const {
  std::lock_guard lock(mutex_);
  return names_.count(name) != 0;
}

GroupWord Alphabet::named(const std::string& name) const {
  std::lock_guard lock(mutex_);
  auto it = names_.find(name);
  if (it == names_.end()) throw InvalidInput("unknown generator name: " + name);
  return GroupWord(symbols_[it->second]->level, {Letter{it->second, false}});
}

GroupWord Alphabet::parse(std::string_view text, std::size_t level) {
  GroupWord out(canonical_level(level));
  std::size_t i = 0;
  while (true) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == text.size()) break;
    std::size_t start = i;
    GroupWord letter;
    if (text.compare(i, 2, "a[") == 0) {
      const std::size_t close = text.find(']', i);
      if (close == std::string_view::npos) throw InvalidInput("unterminated inline rooted letter");
      letter = rooted(Permutation::parse(text.substr(i + 2, close - i - 2), degree(level)), level);
      i = close + 1;
    } else {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '^') ++i;
      letter = named(std::string(text.substr(start, i - start)));
      if (letter.level() != out.level()) throw InvalidInput("generator lives at another level");
    }
    if (text.compare(i, 3, "^-1") == 0) {
      letter = letter.inverse();
      i += 3;
    } else if (i < text.size() && text[i] == '^') {
      throw InvalidInput("only ^-1 exponents are supported");
    }
    out *= letter;
  }
  return out;
}

std::string Alphabet::format(const GroupWord& w) const {
  std::lock_guard lock(mutex_);
  if (w.empty()) return "e";
  std::ostringstream out;
  bool first = true;
  for (const auto& l : w.letters()) {
    if (!first) out << ' ';
    first = false;
    auto it = names_by_id_.find(l.symbol);
    if (it != names_by_id_.end()) {
      out << it->second;
    } else if (symbols_[l.symbol]->kind == SymbolKind::rooted) {
      out << "a[" << symbols_[l.symbol]->root.to_string() << ']';
    } else {
      out << 'h' << l.symbol;
    }
    if (l.inverse) out << "^-1";
  }
  return out.str();
}

GroupWord Alphabet::reduce(const GroupWord& w) {
  std::lock_guard lock(mutex_);
  return reduce_unlocked(w);
}

GroupWord Alphabet::reduce_unlocked(const GroupWord& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  // Pending rooted run, merged into one letter when a directed letter arrives.
  std::optional<Permutation> run;
  auto flush = [&] {
    if (!run) return;
    if (!run->is_identity()) {
      Symbol s{SymbolKind::rooted, w.level(), *run, {}};
      stack.push_back(Letter{intern(std::move(s)), false});
    }
    run.reset();
  };
  for (const auto& l : w.letters()) {
    const Symbol& s = *symbols_[l.symbol];
    if (s.kind == SymbolKind::rooted) {
      const Permutation p = l.inverse ? s.root.inverse() : s.root;
      if (!run && !stack.empty() && symbols_[stack.back().symbol]->kind == SymbolKind::rooted) {
        const Letter top = stack.back();
        stack.pop_back();
        run = symbols_[top.symbol]->root;
      }
      run = run ? compose(*run, p) : p;
      continue;
    }
    flush();
    if (!stack.empty() && stack.back().symbol == l.symbol && stack.back().inverse != l.inverse) {
      stack.pop_back();
      continue;
    }
    stack.push_back(l);
  }
  flush();
  return GroupWord(w.level(), std::move(stack));
}

std::shared_ptr<const Decomposition> Alphabet::letter_decomposition(Letter letter) {
  std::lock_guard lock(mutex_);
  auto cached = letter_cache_[letter.symbol];
  if (!cached) {
    const Symbol s = *symbols_[letter.symbol];
    const std::size_t d = degree(s.level);
    const std::size_t next = canonical_level(s.level + 1);
    auto dec = std::make_shared<Decomposition>();
    if (s.kind == SymbolKind::rooted) {
      dec->sections.assign(d, GroupWord(next));
      dec->root = s.root;
    } else {
      const BElement& top = s.spec.level(0);
      dec->sections.push_back(directed(s.spec.shift(), next));
      for (Point t = 1; t < d; ++t) dec->sections.push_back(rooted(top.at(t), next));
      dec->root = top.rho;
    }
    cached = dec;
    letter_cache_[letter.symbol] = cached;
  }
  if (!letter.inverse) return cached;
  // (g_t) sigma inverted: root sigma^-1, section at s is g_{sigma^-1(s)}^-1.
  auto inv = std::make_shared<Decomposition>();
  inv->root = cached->root.inverse();
  for (Point t = 0; t < inv->root.degree(); ++t) {
    inv->sections.push_back(cached->sections[inv->root(t)].inverse());
  }
  return inv;
}

std::shared_ptr<const Decomposition> Alphabet::decompose(const GroupWord& input) {
  std::lock_guard lock(mutex_);
  GroupWord w = reduce_unlocked(input);
  Key key{w.level(), w.letters()};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const std::size_t d = degree(w.level());
  const std::size_t next = canonical_level(w.level() + 1);
  std::vector<std::vector<Letter>> sections(d);
  Permutation current = Permutation::identity(d);
  for (const auto& l : w.letters()) {
    auto ld = letter_decomposition(l);
    // (g_t) sigma * (h_t) tau = (g_t h_{sigma(t)}) sigma tau
    for (Point t = 0; t < d; ++t) {
      const auto& piece = ld->sections[current(t)].letters();
      sections[t].insert(sections[t].end(), piece.begin(), piece.end());
    }
    current = compose(current, ld->root);
  }
  auto dec = std::make_shared<Decomposition>();
  dec->root = std::move(current);
  dec->sections.reserve(d);
  for (auto& s : sections) dec->sections.push_back(reduce_unlocked(GroupWord(next, std::move(s))));
  memo_.emplace(std::move(key), dec);
  return dec;
}

void Alphabet::clear_memo() {
  std::lock_guard lock(mutex_);
  memo_.clear();
}

std::size_t Alphabet::memo_size() const {
  std::lock_guard lock(mutex_);
  return memo_.size();
}

// ---------------------------------------------------------------------------

std::vector<Point> act(Alphabet& alphabet, const GroupWord& w, std::span<const Point> vertex) {
  std::vector<Point> out;
  out.reserve(vertex.size());
  GroupWord current = w;
  for (std::size_t j = 0; j < vertex.size(); ++j) {
    if (vertex[j] >= alphabet.degree(w.level() + j)) throw InvalidInput("invalid vertex address");
    auto dec = alphabet.decompose(current);
    out.push_back(dec->root(vertex[j]));
    current = dec->sections[vertex[j]];
  }
  return out;
}

GroupWord section(Alphabet& alphabet, const GroupWord& w, std::span<const Point> vertex) {
  GroupWord current = w;
  for (std::size_t j = 0; j < vertex.size(); ++j) {
    if (vertex[j] >= alphabet.degree(w.level() + j)) throw InvalidInput("invalid vertex address");
    current = alphabet.decompose(current)->sections[vertex[j]];
  }
  return current;
}

Portrait portrait(Alphabet& alphabet, const GroupWord& w, std::size_t depth) {
  Portrait p;
  std::vector<GroupWord> frontier{w};
  for (std::size_t j = 0; j < depth; ++j) {
    const std::size_t d = alphabet.degree(w.level() + j);
    p.degrees.push_back(d);
    std::vector<Permutation> labels;
    std::vector<GroupWord> next;
    labels.reserve(frontier.size());
    next.reserve(frontier.size() * d);
    const GroupWord empty_next = alphabet.identity(w.level() + j + 1);
    for (const auto& g : frontier) {
      if (g.empty()) {
        labels.push_back(Permutation::identity(d));
        if (j + 1 < depth) next.insert(next.end(), d, empty_next);
        continue;
      }
      auto dec = alphabet.decompose(g);
      labels.push_back(dec->root);
      if (j + 1 < depth) next.insert(next.end(), dec->sections.begin(), dec->sections.end());
    }
    p.levels.push_back(std::move(labels));
    frontier = std::move(next);
  }
  return p;
}

std::vector<GroupWord> sections_at_depth(Alphabet& alphabet, const GroupWord& w, std::size_t depth) {
  std::vector<GroupWord> frontier{w};
  for (std::size_t j = 0; j < depth; ++j) {
    const std::size_t d = alphabet.degree(w.level() + j);
    const GroupWord empty_next = alphabet.identity(w.level() + j + 1);
    std::vector<GroupWord> next;
    next.reserve(frontier.size() * d);
    for (const auto& g : frontier) {
      if (g.empty()) {
        next.insert(next.end(), d, empty_next);
        continue;
      }
      auto dec = alphabet.decompose(g);
      next.insert(next.end(), dec->sections.begin(), dec->sections.end());
    }
    frontier = std::move(next);
  }
  return frontier;
}

bool is_identity(Alphabet& alphabet, const GroupWord& w) {
  struct KeyHash {
    std::size_t operator()(const GroupWord& g) const noexcept {
      std::uint64_t h = 1469598103934665603ull ^ g.level();
      for (const auto& l : g.letters()) {
        h ^= (static_cast<std::uint64_t>(l.symbol) << 1) | static_cast<std::uint64_t>(l.inverse);
        h *= 1099511628211ull;
      }
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_set<GroupWord, KeyHash> visited;
  std::vector<GroupWord> pending;
  GroupWord start = alphabet.reduce(w);
  if (start.empty()) return true;
  visited.insert(start);
  pending.push_back(std::move(start));
  while (!pending.empty()) {
    GroupWord g = std::move(pending.back());
    pending.pop_back();
    auto dec = alphabet.decompose(g);
    if (!dec->root.is_identity()) return false;
    for (const auto& s : dec->sections) {
      if (s.empty()) continue;
      if (visited.insert(s).second) pending.push_back(s);
    }
  }
  return true;
}

namespace {

std::size_t level_points(const ValencySequence& v, std::size_t level, std::size_t j, std::size_t bound) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < j; ++i) {
    n *= v(level + i);
    if (n > bound) throw ResourceLimit("level permutation exceeds the configured point bound");
  }
  return n;
}

std::vector<Point> level_images(Alphabet& alphabet, const GroupWord& w, std::size_t j) {
  const std::size_t n = level_points(alphabet.valencies(), w.level(), j, alphabet.max_level_points);
  std::vector<Point> out(n);
  if (j == 0) return {0};
  if (w.empty()) {
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Point>(i);
    return out;
  }
  auto dec = alphabet.decompose(w);
  const std::size_t d = dec->root.degree();
  const std::size_t m = n / d;
  for (Point t = 0; t < d; ++t) {
    const auto sub = level_images(alphabet, dec->sections[t], j - 1);
    const std::size_t base = static_cast<std::size_t>(dec->root(t)) * m;
    for (std::size_t r = 0; r < m; ++r) out[t * m + r] = static_cast<Point>(base + sub[r]);
  }
  return out;
}

}  // namespace

Permutation level_permutation(Alphabet& alphabet, const GroupWord& w, std::size_t j) {
  if (j == 0) throw InvalidInput("level index must be >= 1");
  return Permutation(level_images(alphabet, w, j));
}

Permutation level_permutation(const Portrait& p, std::size_t j) {
  if (j == 0 || j > p.depth()) throw InvalidInput("level index outside portrait depth");
  std::size_t n = 1;
  for (std::size_t i = 0; i < j; ++i) n *= p.degrees[i];
  std::vector<Point> out(n);
  const std::span<const std::size_t> degs(p.degrees.data(), j);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto v = vertex_address(degs, j, idx);
    std::vector<Point> image(j);
    for (std::size_t i = 0; i < j; ++i) {
      image[i] = p.levels[i][vertex_index(degs.subspan(0, i), std::span<const Point>(v.data(), i))](v[i]);
    }
    out[idx] = static_cast<Point>(vertex_index(degs, image));
  }
  return Permutation(std::move(out));
}

}  // namespace folner
