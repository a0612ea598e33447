#include "wh/word.hpp"

#include <algorithm>
#include <set>

#include "wh/error.hpp"

namespace wh {

Letter Letter::from_char(char c) {
  if (c >= 'a' && c <= 'z') return generator(c - 'a', false);
  if (c >= 'A' && c <= 'Z') return generator(c - 'A', true);
  throw ParseError(std::string("invalid letter '") + c + "'");
}

char Letter::to_char() const {
  return static_cast<char>((is_inverse() ? 'A' : 'a') + index());
}

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < kMinRank || rank > kMaxRank)
    throw InvalidArgument("rank " + std::to_string(rank) + " outside [2, 26]");
}

std::vector<Letter> Alphabet::letters() const {
  std::vector<Letter> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (int c = 0; c < size(); ++c) out.push_back(Letter::from_code(static_cast<std::uint8_t>(c)));
  return out;
}

std::vector<Letter> parse_letters(std::string_view text) {
  std::vector<Letter> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(Letter::from_char(c));
  return out;
}

std::string to_string(std::span<const Letter> letters) {
  std::string out;
  out.reserve(letters.size());
  for (Letter x : letters) out.push_back(x.to_char());
  return out;
}

int rank_of(std::span<const Letter> letters) {
  int rank = kMinRank;
  for (Letter x : letters) rank = std::max(rank, x.index() + 1);
  return rank;
}

bool is_freely_reduced(std::span<const Letter> letters) {
  for (std::size_t i = 1; i < letters.size(); ++i)
    if (letters[i] == letters[i - 1].inverse()) return false;
  return true;
}

bool is_cyclically_reduced(std::span<const Letter> letters) {
  if (!is_freely_reduced(letters)) return false;
  return letters.size() < 2 || letters.front() != letters.back().inverse();
}

Word free_reduce(std::span<const Letter> raw) {
  std::vector<Letter> stack;
  stack.reserve(raw.size());
  for (Letter x : raw) {
    if (!stack.empty() && stack.back() == x.inverse())
      stack.pop_back();
    else
      stack.push_back(x);
  }
  return Word(std::move(stack));
}

Word Word::parse(std::string_view text) { return free_reduce(parse_letters(text)); }

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& x : out) x = x.inverse();
  return Word(std::move(out));
}

Word operator*(const Word& lhs, const Word& rhs) {
  std::vector<Letter> raw;
  raw.reserve(lhs.size() + rhs.size());
  raw.insert(raw.end(), lhs.letters_.begin(), lhs.letters_.end());
  raw.insert(raw.end(), rhs.letters_.begin(), rhs.letters_.end());
  return free_reduce(raw);
}

std::size_t least_rotation(std::span<const Letter> s) {
  const std::size_t n = s.size();
  if (n < 2) return 0;
  // Booth's failure-function scan over the doubled string.
  std::vector<std::ptrdiff_t> fail(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const Letter sj = s[j % n];
    std::ptrdiff_t i = fail[j - k - 1];
    while (i != -1 && sj != s[(k + static_cast<std::size_t>(i) + 1) % n]) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = fail[static_cast<std::size_t>(i)];
    }
    if (sj != s[(k + static_cast<std::size_t>(i + 1)) % n]) {  // i == -1
      if (sj < s[k % n]) k = j;
      fail[j - k] = -1;
    } else {
      fail[j - k] = i + 1;
    }
  }
  return k % n;
}

CyclicWord canonical_rotation(std::span<const Letter> letters) {
  if (letters.empty()) throw InvalidArgument("canonical_rotation: empty word");
  if (!is_cyclically_reduced(letters))
    throw InvalidArgument("canonical_rotation: '" + to_string(letters) + "' is not cyclically reduced");
  const std::size_t k = least_rotation(letters);
  std::vector<Letter> out;
  out.reserve(letters.size());
  out.insert(out.end(), letters.begin() + static_cast<std::ptrdiff_t>(k), letters.end());
  out.insert(out.end(), letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k));
  return CyclicWord(std::move(out));
}

CyclicReduction cyclic_reduce(const Word& w) {
  const auto s = w.letters();
  std::size_t i = 0, j = s.size();
  while (j - i >= 2 && s[i] == s[j - 1].inverse()) {
    ++i;
    --j;
  }
  CyclicReduction out;
  out.conjugator = free_reduce(s.subspan(0, i));
  out.core = free_reduce(s.subspan(i, j - i));
  if (!out.core.empty()) out.cls = canonical_rotation(out.core.letters());
  return out;
}

CyclicWord CyclicWord::parse(std::string_view text) {
  auto red = cyclic_reduce(Word::parse(text));
  if (!red.cls) throw InvalidArgument("'" + std::string(text) + "' is the identity");
  return *std::move(red.cls);
}

Word CyclicWord::word() const { return free_reduce(letters_); }

CyclicWord CyclicWord::inverse() const {
  std::vector<Letter> inv(letters_.rbegin(), letters_.rend());
  for (Letter& x : inv) x = x.inverse();
  return canonical_rotation(inv);
}

std::uint64_t CyclicWord::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (Letter x : letters_) {
    h ^= x.code();
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t occurrences_cyclic(const Word& v, const CyclicWord& w) {
  const std::size_t n = w.size(), m = v.size();
  if (m == 0) return 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    while (j < m && w[(i + j) % n] == v[j]) ++j;
    if (j == m) ++count;
  }
  return count;
}

std::size_t occurrences_symmetrized(const Word& v, const CyclicWord& w) {
  return occurrences_cyclic(v, w) + occurrences_cyclic(v.inverse(), w);
}

std::vector<Word> reduced_words(int rank, std::size_t length) {
  const Alphabet alphabet(rank);
  std::vector<std::vector<Letter>> layer{{}};
  for (std::size_t l = 0; l < length; ++l) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : layer)
      for (Letter x : alphabet.letters()) {
        if (!w.empty() && w.back() == x.inverse()) continue;
        auto ext = w;
        ext.push_back(x);
        next.push_back(std::move(ext));
      }
    layer = std::move(next);
  }
  std::vector<Word> out;
  out.reserve(layer.size());
  for (const auto& w : layer) out.push_back(free_reduce(w));
  return out;
}

std::vector<CyclicWord> cyclic_classes(int rank, std::size_t length) {
  std::set<CyclicWord> classes;
  if (length == 0) return {};
  for (const Word& w : reduced_words(rank, length))
    if (is_cyclically_reduced(w.letters())) classes.insert(canonical_rotation(w.letters()));
  return {classes.begin(), classes.end()};
}

}  // namespace wh
