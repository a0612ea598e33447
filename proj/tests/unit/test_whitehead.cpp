#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracle.hpp"
#include "wh/error.hpp"
#include "wh/minimality.hpp"
#include "wh/samplers.hpp"
#include "wh/whitehead.hpp"

using namespace wh;

namespace {

const MoveSet& W2() { return MoveSet::for_rank(2); }

std::vector<std::string> strs(const std::vector<CyclicWord>& v) {
  std::vector<std::string> out;
  for (const auto& c : v) out.push_back(c.str());
  std::sort(out.begin(), out.end(), oracle::less_word);
  return out;
}

std::vector<CyclicWord> small_classes(std::size_t max_len) {
  std::vector<CyclicWord> out;
  for (std::size_t n = 1; n <= max_len; ++n)
    for (auto& c : cyclic_classes(2, n)) out.push_back(c);
  return out;
}

}  // namespace

TEST_CASE("minimize examples") {
  CHECK(minimize(W2(), CyclicWord::parse("ab")).result.size() == 1);
  CHECK(minimize(W2(), CyclicWord::parse("abab")).result.size() == 2);
  const auto m = minimize(W2(), CyclicWord::parse("abAB"));
  CHECK(m.result.str() == "abAB");
  CHECK(m.steps == 0);
}

TEST_CASE("minimize reaches the oracle's minimal orbit length") {
  for (const auto& c : small_classes(6)) {
    const auto m = minimize(W2(), c);
    CHECK(m.result.size() == oracle::min_orbit_length(2, c.str(), c.size()));
    CHECK(is_whitehead_minimal(W2(), m.result));
    CHECK(m.steps <= c.size());
    verify_witness(W2(), m.witness);
  }
}

TEST_CASE("minimize descends strictly and replays") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Word w = sample_uniform_nb(2, 30, seed);
    const auto c = cyclic_reduce(w).cls;
    if (!c) continue;
    // Distort by a few moves so there is work to do.
    CyclicWord x = *c;
    for (std::size_t k = 0; k < 3; ++k) x = W2()[7 + (seed + 5 * k) % 12].move.apply(x);
    const auto m = minimize(W2(), x);
    CHECK(witness_replays(W2(), m.witness));
    CyclicWord cur = x;
    for (const auto& s : m.witness.steps) {
      const CyclicWord next = W2()[s.move].move.apply(cur);
      CHECK(next.size() < cur.size());
      cur = next;
    }
    CHECK(minimize(W2(), m.result).steps == 0);
  }
}

TEST_CASE("speed-up minimization") {
  const CyclicWord c = CyclicWord::parse("aabAbbABaBB");
  const std::vector<std::vector<std::size_t>> identity{{}};
  CHECK(speedup_minimize(W2(), c, identity).result == minimize(W2(), c).result);

  const std::vector<Word> tau_images{Word::parse("aB"), Word::parse("b")};
  const std::size_t tau = *W2().find(Move::from_images(2, tau_images));
  std::uint64_t seed = 0;
  CyclicWord v = sample_uniform_cyclic(2, 200, seed);
  while (!is_strictly_minimal(W2(), v)) v = sample_uniform_cyclic(2, 200, ++seed);
  const CyclicWord w = W2()[W2()[tau].inverse].move.apply(v);
  const std::vector<std::vector<std::size_t>> aux{{tau}};
  const auto r = speedup_minimize(W2(), w, aux);
  CHECK(r.result == v);
  CHECK(r.steps == 0);
  verify_witness(W2(), r.witness);
  CHECK(r.result.size() <= minimize(W2(), w).result.size());
}

TEST_CASE("level components equal the minimal part of the orbit") {
  const auto a = level_component(W2(), CyclicWord::parse("a"));
  CHECK(strs(a.vertices) == std::vector<std::string>{"a", "A", "b", "B"});
  for (const auto& c : small_classes(5)) {
    if (!is_whitehead_minimal(W2(), c)) continue;
    const auto lc = level_component(W2(), c);
    CHECK(lc.vertices[0] == c);
    for (const auto& v : lc.vertices) CHECK(v.size() == c.size());
    std::vector<std::string> expect;
    for (const auto& s : oracle::orbit_within(2, c.str(), c.size()))
      if (s.size() == c.size()) expect.push_back(s);
    CHECK(strs(lc.vertices) == expect);
    for (const auto& e : lc.edges) CHECK(W2()[e.move].move.apply(lc.vertices[e.from]) == lc.vertices[e.to]);
  }
  CHECK_THROWS_AS(level_component(W2(), CyclicWord::parse("ab")), InvalidArgument);
  CHECK_THROWS_AS(level_component(W2(), CyclicWord::parse("a"), 2), CapExceeded);
}

TEST_CASE("equivalence examples and properties") {
  CHECK(equivalent(W2(), CyclicWord::parse("a"), CyclicWord::parse("b")).equivalent);
  CHECK_FALSE(equivalent(W2(), CyclicWord::parse("abAB"), CyclicWord::parse("a")).equivalent);
  const auto same = equivalent(W2(), CyclicWord::parse("ab"), CyclicWord::parse("ba"));
  CHECK(same.equivalent);
  CHECK(same.witness->steps.empty());

  std::vector<CyclicWord> pool;
  for (std::uint64_t s = 0; s < 12; ++s) {
    CyclicWord c = sample_uniform_cyclic(2, 5, s);
    pool.push_back(c);
    pool.push_back(W2()[7 + s % 12].move.apply(c));
  }
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      const auto e = equivalent(W2(), pool[i], pool[j]);
      CHECK(e.equivalent == equivalent(W2(), pool[j], pool[i]).equivalent);
      if (e.equivalent) {
        CHECK(e.witness->source == pool[i]);
        CHECK(e.witness->target == pool[j]);
        verify_witness(W2(), *e.witness);
        for (std::size_t k = 0; k < pool.size(); k += 3)
          if (equivalent(W2(), pool[j], pool[k]).equivalent) CHECK(equivalent(W2(), pool[i], pool[k]).equivalent);
      }
    }
}

TEST_CASE("witness checks catch tampering") {
  const auto e = equivalent(W2(), CyclicWord::parse("aab"), CyclicWord::parse("abbb"));
  REQUIRE(e.equivalent);
  Witness bad = *e.witness;
  REQUIRE_FALSE(bad.steps.empty());
  bad.steps[0].pre ^= 1;
  CHECK_THROWS_AS(verify_witness(W2(), bad), WitnessMismatch);
  Witness wrong_target = *e.witness;
  wrong_target.target = CyclicWord::parse("abAB");
  CHECK_FALSE(witness_replays(W2(), wrong_target));
  const Witness back = reverse_witness(W2(), *e.witness);
  CHECK(back.source == e.witness->target);
  verify_witness(W2(), back);
  verify_witness(W2(), concat_witness(*e.witness, back));
}

TEST_CASE("stabilizer loops") {
  const CyclicWord a = CyclicWord::parse("a");
  const auto loops = stabilizer_generators(W2(), a);
  const auto lc = level_component(W2(), a);
  CHECK(loops.size() == lc.topological_edge_count(W2()) + 1 - lc.vertices.size());
  bool has_b_flip = false;
  for (const auto& l : loops) {
    CHECK(l.source == a);
    CHECK(l.target == a);
    verify_witness(W2(), l);
    if (l.steps.size() == 1 && W2()[l.steps[0].move].move.image(Letter::from_char('b')).str() == "B" &&
        W2()[l.steps[0].move].move.image(Letter::from_char('a')).str() == "a")
      has_b_flip = true;
  }
  CHECK(has_b_flip);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CyclicWord c = minimize(W2(), sample_uniform_cyclic(2, 300, seed)).result;
    for (const auto& l : stabilizer_generators(W2(), c)) {
      CHECK(l.source == c);
      CHECK(witness_replays(W2(), l));
    }
  }
}

TEST_CASE("orbit balls match the oracle") {
  for (const char* s : {"a", "ab", "aab", "abAB", "aabb", "aaab"}) {
    const CyclicWord c = CyclicWord::parse(s);
    for (std::size_t cap = c.size(); cap <= c.size() + 2; ++cap)
      CHECK(strs(orbit_ball(W2(), c, cap)) == oracle::orbit_within(2, s, cap));
  }
}
