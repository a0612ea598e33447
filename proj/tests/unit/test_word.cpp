#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "wh/error.hpp"
#include "wh/word.hpp"

using namespace wh;

namespace {

std::string random_raw(std::mt19937_64& rng, int rank, std::size_t len) {
  std::string s;
  std::uniform_int_distribution<int> d(0, 2 * rank - 1);
  for (std::size_t i = 0; i < len; ++i) {
    const int c = d(rng);
    s += static_cast<char>((c % 2 ? 'A' : 'a') + c / 2);
  }
  return s;
}

}  // namespace

TEST_CASE("letters order a < A < b < B") {
  CHECK(Letter::from_char('a') < Letter::from_char('A'));
  CHECK(Letter::from_char('A') < Letter::from_char('b'));
  CHECK(Letter::from_char('b').inverse() == Letter::from_char('B'));
  CHECK(Letter::from_char('Z').index() == 25);
  CHECK_THROWS_AS(Letter::from_char('1'), ParseError);
  CHECK_THROWS_AS(Alphabet(1), InvalidArgument);
  CHECK_THROWS_AS(Alphabet(27), InvalidArgument);
  CHECK(Alphabet(3).letters().size() == 6);
}

TEST_CASE("free_reduce examples") {
  CHECK(free_reduce(parse_letters("aA")).empty());
  CHECK(free_reduce(parse_letters("abBA")).empty());
  CHECK(free_reduce(parse_letters("abbAab")).str() == "abbb");
  CHECK(Word::parse("abbAab").str() == "abbb");
}

TEST_CASE("free_reduce matches the string model and is idempotent") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string raw = random_raw(rng, 3, rng() % 20);
    const Word w = Word::parse(raw);
    CHECK(w.str() == oracle::reduce(raw));
    CHECK(free_reduce(w.letters()) == w);
    CHECK(w.size() <= raw.size());
    CHECK((w * w.inverse()).empty());
  }
}

TEST_CASE("cyclic_reduce examples") {
  auto r = cyclic_reduce(Word::parse("aba"));
  CHECK(r.cls->str() == "aab");
  CHECK(r.conjugator.empty());
  r = cyclic_reduce(Word::parse("abA"));
  CHECK(r.cls->str() == "b");
  CHECK(r.conjugator.str() == "a");
  r = cyclic_reduce(Word::parse("aabbAA"));
  CHECK(r.cls->str() == "bb");
  CHECK(r.conjugator.str() == "aa");
  CHECK_FALSE(cyclic_reduce(Word::parse("abBA")).cls.has_value());
}

TEST_CASE("cyclic_reduce reassembles and matches the string model") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 2000; ++i) {
    const Word w = Word::parse(random_raw(rng, 2, rng() % 16));
    const auto r = cyclic_reduce(w);
    CHECK((r.cls ? r.cls->str() : std::string()) == oracle::canon(w.str()));
    if (!r.cls) continue;
    CHECK(r.cls->size() <= w.size());
    CHECK(is_cyclically_reduced(r.core.letters()));
    CHECK(r.conjugator * r.core * r.conjugator.inverse() == w);
  }
}

TEST_CASE("canonical_rotation examples and errors") {
  CHECK(canonical_rotation(parse_letters("ba")).str() == "ab");
  CHECK(canonical_rotation(parse_letters("bab")).str() == "abb");
  CHECK(canonical_rotation(parse_letters("aaa")).str() == "aaa");
  CHECK_THROWS_AS(canonical_rotation(parse_letters("abA")), InvalidArgument);
  CHECK_THROWS_AS(canonical_rotation(parse_letters("")), InvalidArgument);
  CHECK_THROWS_AS(CyclicWord::parse("aA"), InvalidArgument);
}

TEST_CASE("canonical rotation is rotation invariant and least") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    std::string s;
    do s = oracle::cyclic_core(oracle::reduce(random_raw(rng, 3, 1 + rng() % 12)));
    while (s.empty());
    const std::string expect = oracle::least_rotation(s);
    for (std::size_t r = 0; r < s.size(); ++r) {
      const std::string rot = s.substr(r) + s.substr(0, r);
      CHECK(canonical_rotation(parse_letters(rot)).str() == expect);
    }
  }
}

TEST_CASE("classes are not identified with their inverses") {
  const auto c = CyclicWord::parse("aab");
  CHECK(c.inverse().str() == "AAB");
  CHECK(c != c.inverse());
  CHECK(c.fingerprint() == CyclicWord::parse("aba").fingerprint());
}

TEST_CASE("occurrence examples") {
  CHECK(occurrences_cyclic(Word::parse("ab"), CyclicWord::parse("ababab")) == 3);
  CHECK(occurrences_cyclic(Word::parse("aa"), CyclicWord::parse("ab")) == 0);
  CHECK(occurrences_cyclic(Word::parse("ba"), CyclicWord::parse("aab")) == 1);
  CHECK(occurrences_symmetrized(Word::parse("ab"), CyclicWord::parse("ababab")) == 3);
  CHECK(occurrences_symmetrized(Word::parse("a"), CyclicWord::parse("aab")) == 2);
}

TEST_CASE("occurrence identities") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 200; ++i) {
    std::string s;
    do s = oracle::canon(random_raw(rng, 2, 1 + rng() % 14));
    while (s.empty());
    const auto w = CyclicWord::parse(s);
    std::size_t letters = 0;
    for (const Word& v : reduced_words(2, 1)) letters += occurrences_symmetrized(v, w);
    CHECK(letters == 2 * w.size());
    for (std::size_t k = 1; k <= 3; ++k) {
      std::size_t total = 0;
      for (const Word& v : reduced_words(2, k)) {
        const std::size_t occ = occurrences_cyclic(v, w);
        CHECK(occ == oracle::occurrences(v.str(), s));
        total += occ;
        std::size_t ext = 0;
        for (Letter x : Alphabet(2).letters())
          if (x != v[v.size() - 1].inverse()) ext += occurrences_cyclic(v * Word::parse(std::string(1, x.to_char())), w);
        CHECK(ext == occ);
      }
      CHECK(total == w.size());
    }
  }
}

TEST_CASE("enumeration counts match the string model") {
  for (int rank = 2; rank <= 3; ++rank)
    for (std::size_t n = 1; n <= 4; ++n) {
      CHECK(reduced_words(rank, n).size() == oracle::all_reduced(rank, n).size());
      const auto classes = cyclic_classes(rank, n);
      const auto expect = oracle::all_classes(rank, n);
      REQUIRE(classes.size() == expect.size());
      for (std::size_t i = 0; i < classes.size(); ++i) CHECK(classes[i].str() == expect[i]);
    }
  CHECK(reduced_words(2, 3).size() == 36);
}
