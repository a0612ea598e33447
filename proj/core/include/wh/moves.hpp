#pragma once

// Whitehead automorphisms of F_N: relabelings (first kind) and
// multiplier/tag moves (second kind), stored as letter-image tables.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wh/word.hpp"

namespace wh {

enum class MoveKind : std::uint8_t { First, Second };

/// Action of a second-kind move on a generator x other than the multiplier a.
enum class Tag : std::uint8_t {
  Keep,   // x -> x
  Right,  // x -> x a
  Left,   // x -> a^-1 x
  Conj,   // x -> a^-1 x a
};

class Move {
 public:
  /// images[i] is the image of a_{i+1}; each must be a single letter and the
  /// indices must form a permutation.
  static Move first_kind(int rank, std::span<const Letter> images);
  /// tags[i] is the tag of generator i; the entry at the multiplier's index
  /// is ignored.
  static Move second_kind(int rank, Letter multiplier, std::span<const Tag> tags);
  /// Generic constructor from generator images; the kind and multiplier are
  /// recovered when the images match one of the two shapes.
  static Move from_images(int rank, std::span<const Word> generator_images);

  int rank() const { return rank_; }
  MoveKind kind() const { return kind_; }
  std::optional<Letter> multiplier() const { return multiplier_; }
  /// Image of a signed letter (2N entries).
  const Word& image(Letter x) const { return images_[x.code()]; }

  Word apply(const Word& w) const;
  Word apply(std::span<const Letter> letters) const;
  CyclicWord apply(const CyclicWord& c) const;
  /// ||m(c)|| without building the canonical rotation.
  std::size_t image_length(const CyclicWord& c) const;

  Move inverse() const;

  /// {"kind": "first"|"second", "multiplier"?: "a", "images": [...]}.
  nlohmann::json to_json() const;
  static Move from_json(const nlohmann::json& j, int rank);

  /// Letter-map key; equal keys mean equal automorphisms.
  std::string key() const;
  friend bool operator==(const Move& a, const Move& b) { return a.images_ == b.images_; }

 private:
  Move(int rank, MoveKind kind, std::optional<Letter> multiplier, std::vector<Word> images)
      : rank_(rank), kind_(kind), multiplier_(multiplier), images_(std::move(images)) {}
  int rank_ = 2;
  MoveKind kind_ = MoveKind::First;
  std::optional<Letter> multiplier_;
  std::vector<Word> images_;
};

/// Largest rank for which the full move set is enumerated; the first-kind
/// family alone has 2^N N! members.
inline constexpr int kMaxEnumeratedRank = 6;

struct MoveEntry {
  Move move;
  std::size_t index;
  bool first_kind;
  /// All tags Conj: acts trivially on conjugacy classes.
  bool inner;
  std::size_t inverse;
};

/// The finite set W_N of nontrivial Whitehead moves, in a fixed order:
/// first-kind moves by permutation (lexicographic) then sign mask, then
/// second-kind moves by multiplier (a, A, b, B, ...) then tag vector read
/// as a base-4 number, most significant generator first.
class MoveSet {
 public:
  explicit MoveSet(int rank);
  /// Shared immutable instance per rank.
  static const MoveSet& for_rank(int rank);

  int rank() const { return rank_; }
  std::size_t size() const { return entries_.size(); }
  const MoveEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<MoveEntry>& entries() const { return entries_; }
  std::size_t first_kind_count() const { return first_kind_count_; }
  std::optional<std::size_t> find(const Move& m) const;

 private:
  int rank_;
  std::size_t first_kind_count_ = 0;
  std::vector<MoveEntry> entries_;
};

}  // namespace wh
