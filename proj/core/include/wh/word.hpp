#pragma once

// Freely and cyclically reduced words over the alphabet a_1..a_N and their
// inverses. Text form uses a..z for generators and A..Z for inverses.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wh {

inline constexpr int kMinRank = 2;
inline constexpr int kMaxRank = 26;

/// A signed generator. Stored as code = 2*index + (inverse ? 1 : 0), so the
/// natural order of codes is a < A < b < B < ...
class Letter {
 public:
  constexpr Letter() = default;

  static constexpr Letter from_code(std::uint8_t code) { return Letter(code); }
  /// `index` is 0-based: generator(0) is a_1.
  static constexpr Letter generator(int index, bool inverse = false) {
    return Letter(static_cast<std::uint8_t>(2 * index + (inverse ? 1 : 0)));
  }
  static Letter from_char(char c);

  constexpr std::uint8_t code() const { return code_; }
  constexpr int index() const { return code_ >> 1; }
  constexpr bool is_inverse() const { return (code_ & 1) != 0; }
  constexpr Letter inverse() const { return Letter(code_ ^ 1); }
  char to_char() const;

  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  explicit constexpr Letter(std::uint8_t code) : code_(code) {}
  std::uint8_t code_ = 0;
};

static_assert(sizeof(Letter) == 1);

/// Rank of a free group, 2 <= N <= 26.
class Alphabet {
 public:
  explicit Alphabet(int rank);
  int rank() const { return rank_; }
  /// Number of signed letters, 2N.
  int size() const { return 2 * rank_; }
  bool contains(Letter x) const { return x.index() < rank_; }
  std::vector<Letter> letters() const;

 private:
  int rank_;
};

/// Parses letters without reducing. Throws ParseError on characters outside
/// a..z / A..Z.
std::vector<Letter> parse_letters(std::string_view text);
std::string to_string(std::span<const Letter> letters);

/// Smallest rank that can express all letters (at least 2).
int rank_of(std::span<const Letter> letters);

bool is_freely_reduced(std::span<const Letter> letters);
bool is_cyclically_reduced(std::span<const Letter> letters);

/// A freely reduced word; the empty word is the identity.
class Word {
 public:
  Word() = default;

  /// Parses and freely reduces.
  static Word parse(std::string_view text);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word inverse() const;
  std::string str() const { return to_string(letters_); }

  /// Concatenate then reduce.
  friend Word operator*(const Word& lhs, const Word& rhs);
  friend bool operator==(const Word&, const Word&) = default;

 private:
  friend Word free_reduce(std::span<const Letter> raw);
  explicit Word(std::vector<Letter> reduced) : letters_(std::move(reduced)) {}
  std::vector<Letter> letters_;
};

/// Unique freely reduced representative of the product of `raw`.
Word free_reduce(std::span<const Letter> raw);

/// Conjugacy class of a nontrivial element, stored as the lexicographically
/// least rotation of a cyclically reduced representative. [w] and [w^-1] are
/// different classes.
class CyclicWord {
 public:
  /// Parses, reduces, and canonicalizes; throws InvalidArgument when the
  /// literal represents the identity.
  static CyclicWord parse(std::string_view text);

  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  Word word() const;
  CyclicWord inverse() const;
  std::string str() const { return to_string(letters_); }
  /// FNV-1a over the canonical letters; stable across runs and platforms.
  std::uint64_t fingerprint() const;

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend auto operator<=>(const CyclicWord& a, const CyclicWord& b) {
    return a.letters_ <=> b.letters_;
  }

 private:
  friend CyclicWord canonical_rotation(std::span<const Letter> letters);
  explicit CyclicWord(std::vector<Letter> canonical) : letters_(std::move(canonical)) {}
  std::vector<Letter> letters_;
};

/// Index of the lexicographically least rotation (Booth's algorithm).
std::size_t least_rotation(std::span<const Letter> letters);

/// Throws InvalidArgument unless `letters` is nonempty and cyclically reduced.
CyclicWord canonical_rotation(std::span<const Letter> letters);

struct CyclicReduction {
  /// Empty when the input is the identity.
  std::optional<CyclicWord> cls;
  /// Cyclically reduced middle segment: input == conjugator * core * conjugator^-1.
  Word core;
  Word conjugator;
};

CyclicReduction cyclic_reduce(const Word& w);

/// Forward occurrences of `v` in w^infinity starting at the ||w|| positions.
std::size_t occurrences_cyclic(const Word& v, const CyclicWord& w);
/// occurrences_cyclic(v, w) + occurrences_cyclic(v^-1, w).
std::size_t occurrences_symmetrized(const Word& v, const CyclicWord& w);

/// All freely reduced words of length exactly `length` over rank N, in
/// lexicographic letter order.
std::vector<Word> reduced_words(int rank, std::size_t length);
/// All conjugacy classes with cyclic length exactly `length`, sorted.
std::vector<CyclicWord> cyclic_classes(int rank, std::size_t length);

}  // namespace wh

template <>
struct std::hash<wh::CyclicWord> {
  std::size_t operator()(const wh::CyclicWord& w) const noexcept {
    return static_cast<std::size_t>(w.fingerprint());
  }
};
