#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "folner/directed.hpp"
#include "folner/perm.hpp"
#include "folner/valency.hpp"

namespace folner {

enum class SymbolKind : std::uint8_t { rooted, directed };

/// A generator of some Gamma_i: a rooted automorphism a(sigma) or a directed one.
struct Symbol {
  SymbolKind kind;
  std::size_t level;  // canonical level in the alphabet's valency sequence
  Permutation root;   // rooted payload
  DirectedSpec spec;  // directed payload
};

struct Letter {
  std::uint32_t symbol = 0;
  bool inverse = false;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A word over an Alphabet's symbols, read left to right (first letter acts first).
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::size_t level, std::vector<Letter> letters = {})
      : level_(level), letters_(std::move(letters)) {}

  std::size_t level() const { return level_; }
  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  GroupWord inverse() const;
  GroupWord pow(std::size_t n) const;

  /// Concatenation; both words must live at the same (canonical) level.
  friend GroupWord operator*(const GroupWord& x, const GroupWord& y);
  GroupWord& operator*=(const GroupWord& y);

  friend bool operator==(const GroupWord&, const GroupWord&) = default;

 private:
  std::size_t level_ = 0;
  std::vector<Letter> letters_;
};

/// g = (g_1, ..., g_d) sigma with sections at the next level.
struct Decomposition {
  std::vector<GroupWord> sections;
  Permutation root;
};

/// Labels sigma_v for every vertex of depth < depth(), in lexicographic order
/// per level (coordinate t_0 most significant).
struct Portrait {
  std::vector<std::size_t> degrees;  // degrees[j]: valency at depth j
  std::vector<std::vector<Permutation>> levels;

  std::size_t depth() const { return levels.size(); }
  const Permutation& label(std::span<const Point> vertex) const;
  bool is_trivial() const;
  bool all_even() const;
  /// Nontrivial labels only at vertices 1^{k-1} t, and labels at 1^k fix 1.
  bool is_directed() const;
};

/// Lexicographic index of a vertex below the given per-depth degrees.
std::size_t vertex_index(std::span<const std::size_t> degrees, std::span<const Point> vertex);
std::vector<Point> vertex_address(std::span<const std::size_t> degrees, std::size_t depth, std::size_t index);

/// Symbol table, valency context and decomposition memo for words.
///
/// Symbols are interned by content so equal generators share an id; the
/// decomposition memo is keyed by reduced letter sequences. All members are
/// internally synchronized.
class Alphabet {
 public:
  explicit Alphabet(ValencySequence valencies);

  Alphabet(const Alphabet&) = delete;
  Alphabet& operator=(const Alphabet&) = delete;

  const ValencySequence& valencies() const { return valencies_; }
  std::size_t canonical_level(std::size_t level) const { return valencies_.canonical_level(level); }
  std::size_t degree(std::size_t level) const { return valencies_(level); }

  GroupWord identity(std::size_t level = 0) const { return GroupWord(canonical_level(level)); }

  /// One-letter words; trivial payloads give the empty word. No parity checks here.
  GroupWord rooted(const Permutation& sigma, std::size_t level = 0);
  GroupWord directed(const DirectedSpec& spec, std::size_t level = 0);

  Symbol symbol(std::uint32_t id) const;
  std::size_t symbol_count() const;

  /// Names a one-letter word for the text form.
  void define(const std::string& name, const GroupWord& generator);
  bool has_name(const std::string& name) const;
  GroupWord named(const std::string& name) const;

  /// Whitespace-separated names with optional "^-1"; "a[(1 2 3)]" is an inline rooted letter.
  GroupWord parse(std::string_view text, std::size_t level = 0);
  std::string format(const GroupWord& w) const;

  /// Cancels adjacent inverse letters and merges runs of rooted letters.
  GroupWord reduce(const GroupWord& w);

  std::shared_ptr<const Decomposition> decompose(const GroupWord& w);

  void clear_memo();
  std::size_t memo_size() const;

  /// Upper bound on the number of level points for level permutations.
  std::size_t max_level_points = std::size_t{1} << 20;

 private:
  struct Key {
    std::size_t level;
    std::vector<Letter> letters;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  std::uint32_t intern(Symbol s);
  std::shared_ptr<const Decomposition> letter_decomposition(Letter letter);
  GroupWord reduce_unlocked(const GroupWord& w);

  ValencySequence valencies_;
  mutable std::recursive_mutex mutex_;
  std::vector<std::unique_ptr<const Symbol>> symbols_;
  std::map<std::pair<std::size_t, Permutation>, std::uint32_t> rooted_ids_;
  std::map<std::pair<std::size_t, DirectedSpec>, std::uint32_t> directed_ids_;
  std::vector<std::shared_ptr<const Decomposition>> letter_cache_;
  std::unordered_map<Key, std::shared_ptr<const Decomposition>, KeyHash> memo_;
  std::map<std::string, std::uint32_t> names_;
  std::unordered_map<std::uint32_t, std::string> names_by_id_;

  friend bool is_identity(Alphabet&, const GroupWord&);
};

/// Image of a vertex under w; length preserving.
std::vector<Point> act(Alphabet& alphabet, const GroupWord& w, std::span<const Point> vertex);

/// The section g_v of w at a vertex v.
GroupWord section(Alphabet& alphabet, const GroupWord& w, std::span<const Point> vertex);

Portrait portrait(Alphabet& alphabet, const GroupWord& w, std::size_t depth);

/// Sections g_v for every vertex v of the given depth, in lexicographic order.
std::vector<GroupWord> sections_at_depth(Alphabet& alphabet, const GroupWord& w, std::size_t depth);

/// Terminating word-problem oracle: explores sections with a visited set.
bool is_identity(Alphabet& alphabet, const GroupWord& w);

inline bool equal(Alphabet& alphabet, const GroupWord& x, const GroupWord& y) {
  return is_identity(alphabet, x * y.inverse());
}

/// Permutation induced on level j (points in lexicographic order).
Permutation level_permutation(Alphabet& alphabet, const GroupWord& w, std::size_t j);

/// Same, read off a portrait of depth >= j.
Permutation level_permutation(const Portrait& p, std::size_t j);

}  // namespace folner
