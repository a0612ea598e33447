#include "wh/moves.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "wh/error.hpp"

namespace wh {

namespace {

void check_rank(int rank) {
  if (rank < kMinRank || rank > kMaxRank)
    throw InvalidArgument("rank " + std::to_string(rank) + " outside [2, 26]");
}

std::vector<Word> expand(int rank, std::span<const Word> generator_images) {
  if (static_cast<int>(generator_images.size()) != rank)
    throw InvalidArgument("expected " + std::to_string(rank) + " generator images");
  std::vector<Word> images(static_cast<std::size_t>(2 * rank));
  for (int i = 0; i < rank; ++i) {
    const Word& w = generator_images[static_cast<std::size_t>(i)];
    if (w.empty()) throw InvalidArgument("generator image is trivial");
    for (Letter x : w.letters())
      if (x.index() >= rank) throw InvalidArgument("image letter outside rank");
    images[static_cast<std::size_t>(2 * i)] = w;
    images[static_cast<std::size_t>(2 * i + 1)] = w.inverse();
  }
  return images;
}

Word tagged_image(Letter x, Letter a, Tag tag) {
  const Word wx = free_reduce(std::span<const Letter>(&x, 1));
  const Word wa = free_reduce(std::span<const Letter>(&a, 1));
  switch (tag) {
    case Tag::Keep: return wx;
    case Tag::Right: return wx * wa;
    case Tag::Left: return wa.inverse() * wx;
    case Tag::Conj: return wa.inverse() * wx * wa;
  }
  return wx;
}

}  // namespace

Move Move::first_kind(int rank, std::span<const Letter> images) {
  check_rank(rank);
  if (static_cast<int>(images.size()) != rank) throw InvalidArgument("first-kind move needs N images");
  std::vector<bool> seen(static_cast<std::size_t>(rank), false);
  std::vector<Word> gens;
  for (Letter x : images) {
    if (x.index() >= rank || seen[static_cast<std::size_t>(x.index())])
      throw InvalidArgument("first-kind images are not a signed permutation");
    seen[static_cast<std::size_t>(x.index())] = true;
    gens.push_back(free_reduce(std::span<const Letter>(&x, 1)));
  }
  return Move(rank, MoveKind::First, std::nullopt, expand(rank, gens));
}

Move Move::second_kind(int rank, Letter multiplier, std::span<const Tag> tags) {
  check_rank(rank);
  if (multiplier.index() >= rank) throw InvalidArgument("multiplier outside rank");
  if (static_cast<int>(tags.size()) != rank) throw InvalidArgument("second-kind move needs N tags");
  std::vector<Word> gens;
  for (int i = 0; i < rank; ++i) {
    const Letter x = Letter::generator(i);
    const Tag t = i == multiplier.index() ? Tag::Keep : tags[static_cast<std::size_t>(i)];
    gens.push_back(tagged_image(x, multiplier, t));
  }
  return Move(rank, MoveKind::Second, multiplier, expand(rank, gens));
}

Move Move::from_images(int rank, std::span<const Word> generator_images) {
  check_rank(rank);
  std::vector<Word> images = expand(rank, generator_images);
  const bool single = std::all_of(generator_images.begin(), generator_images.end(),
                                  [](const Word& w) { return w.size() == 1; });
  if (single) {
    std::vector<Letter> letters;
    for (const Word& w : generator_images) letters.push_back(w[0]);
    return first_kind(rank, letters);
  }
  for (int g = 0; g < rank; ++g) {
    if (generator_images[static_cast<std::size_t>(g)] != free_reduce(std::vector{Letter::generator(g)}))
      continue;
    for (bool inv : {false, true}) {
      const Letter a = Letter::generator(g, inv);
      std::vector<Tag> tags(static_cast<std::size_t>(rank), Tag::Keep);
      bool ok = true;
      for (int i = 0; i < rank && ok; ++i) {
        if (i == g) continue;
        ok = false;
        for (Tag t : {Tag::Keep, Tag::Right, Tag::Left, Tag::Conj}) {
          if (tagged_image(Letter::generator(i), a, t) == generator_images[static_cast<std::size_t>(i)]) {
            tags[static_cast<std::size_t>(i)] = t;
            ok = true;
            break;
          }
        }
      }
      if (ok) return second_kind(rank, a, tags);
    }
  }
  throw InvalidArgument("images do not describe a Whitehead move");
}

Word Move::apply(std::span<const Letter> letters) const {
  std::vector<Letter> stack;
  stack.reserve(letters.size() + letters.size() / 2);
  for (Letter x : letters) {
    if (x.index() >= rank_) throw InvalidArgument("letter outside move rank");
    for (Letter y : images_[x.code()].letters()) {
      if (!stack.empty() && stack.back() == y.inverse())
        stack.pop_back();
      else
        stack.push_back(y);
    }
  }
  return free_reduce(stack);
}

Word Move::apply(const Word& w) const { return apply(w.letters()); }

CyclicWord Move::apply(const CyclicWord& c) const {
  auto red = cyclic_reduce(apply(c.letters()));
  if (!red.cls) throw Error("automorphism mapped a nontrivial class to the identity");
  return *std::move(red.cls);
}

std::size_t Move::image_length(const CyclicWord& c) const {
  const Word w = apply(c.letters());
  const auto s = w.letters();
  std::size_t i = 0, j = s.size();
  while (j - i >= 2 && s[i] == s[j - 1].inverse()) {
    ++i;
    --j;
  }
  return j - i;
}

Move Move::inverse() const {
  if (kind_ == MoveKind::First) {
    std::vector<Letter> inv(static_cast<std::size_t>(rank_));
    for (int i = 0; i < rank_; ++i) {
      const Letter y = images_[static_cast<std::size_t>(2 * i)][0];
      inv[static_cast<std::size_t>(y.index())] = Letter::generator(i, y.is_inverse());
    }
    return first_kind(rank_, inv);
  }
  // (a, tags)^-1 = (a^-1, tags).
  const Letter a = *multiplier_;
  std::vector<Word> gens;
  for (int i = 0; i < rank_; ++i) {
    const Letter x = Letter::generator(i);
    if (i == a.index()) {
      gens.push_back(free_reduce(std::vector{x}));
      continue;
    }
    const Word& img = images_[x.code()];
    Tag t = Tag::Keep;
    for (Tag cand : {Tag::Keep, Tag::Right, Tag::Left, Tag::Conj})
      if (tagged_image(x, a, cand) == img) t = cand;
    gens.push_back(tagged_image(x, a.inverse(), t));
  }
  return Move(rank_, MoveKind::Second, a.inverse(), expand(rank_, gens));
}

nlohmann::json Move::to_json() const {
  nlohmann::json j;
  j["kind"] = kind_ == MoveKind::First ? "first" : "second";
  if (multiplier_) j["multiplier"] = std::string(1, multiplier_->to_char());
  nlohmann::json images = nlohmann::json::array();
  for (int i = 0; i < rank_; ++i) images.push_back(images_[static_cast<std::size_t>(2 * i)].str());
  j["images"] = std::move(images);
  return j;
}

Move Move::from_json(const nlohmann::json& j, int rank) {
  if (!j.is_object() || !j.contains("images") || !j["images"].is_array())
    throw ParseError("move record needs an images array");
  std::vector<Word> gens;
  for (const auto& s : j["images"]) gens.push_back(Word::parse(s.get<std::string>()));
  Move m = from_images(rank, gens);
  if (j.contains("kind")) {
    const std::string kind = j["kind"].get<std::string>();
    if ((kind == "first") != (m.kind() == MoveKind::First))
      throw ParseError("move kind '" + kind + "' does not match its images");
  }
  return m;
}

std::string Move::key() const {
  std::string k;
  for (int i = 0; i < rank_; ++i) {
    k += images_[static_cast<std::size_t>(2 * i)].str();
    k += ',';
  }
  return k;
}

MoveSet::MoveSet(int rank) : rank_(rank) {
  check_rank(rank);
  if (rank > kMaxEnumeratedRank)
    throw InvalidArgument("move enumeration supports rank <= " + std::to_string(kMaxEnumeratedRank));
  std::vector<Move> moves;
  std::vector<bool> first;

  std::vector<int> perm(static_cast<std::size_t>(rank));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned mask = 0; mask < (1u << rank); ++mask) {
      bool identity = mask == 0;
      std::vector<Letter> images;
      for (int i = 0; i < rank; ++i) {
        identity = identity && perm[static_cast<std::size_t>(i)] == i;
        images.push_back(Letter::generator(perm[static_cast<std::size_t>(i)], (mask >> i) & 1u));
      }
      if (identity) continue;
      moves.push_back(Move::first_kind(rank, images));
      first.push_back(true);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  first_kind_count_ = moves.size();

  std::vector<Tag> tags(static_cast<std::size_t>(rank));
  for (int code = 0; code < 2 * rank; ++code) {
    const Letter a = Letter::from_code(static_cast<std::uint8_t>(code));
    const std::size_t combos = std::size_t{1} << (2 * (rank - 1));
    for (std::size_t t = 1; t < combos; ++t) {
      std::size_t digits = t;
      for (int i = rank - 1; i >= 0; --i) {
        if (i == a.index()) continue;
        tags[static_cast<std::size_t>(i)] = static_cast<Tag>(digits & 3u);
        digits >>= 2;
      }
      moves.push_back(Move::second_kind(rank, a, tags));
      first.push_back(false);
    }
  }

  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < moves.size(); ++i) {
    if (!seen.emplace(moves[i].key(), entries_.size()).second) continue;
    bool inner = !first[i];
    if (inner) {
      const Letter a = *moves[i].multiplier();
      for (int g = 0; g < rank && inner; ++g)
        if (g != a.index())
          inner = moves[i].image(Letter::generator(g)) == tagged_image(Letter::generator(g), a, Tag::Conj);
    }
    entries_.push_back(MoveEntry{moves[i], entries_.size(), first[i], inner, 0});
  }
  for (auto& e : entries_) {
    auto it = seen.find(e.move.inverse().key());
    if (it == seen.end()) throw Error("move set is not closed under inversion");
    e.inverse = it->second;
  }
}

const MoveSet& MoveSet::for_rank(int rank) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<MoveSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[rank];
  if (!slot) slot = std::make_unique<MoveSet>(rank);
  return *slot;
}

std::optional<std::size_t> MoveSet::find(const Move& m) const {
  if (m.rank() != rank_) return std::nullopt;
  const std::string k = m.key();
  for (const auto& e : entries_)
    if (e.move.key() == k) return e.index;
  return std::nullopt;
}

}  // namespace wh
