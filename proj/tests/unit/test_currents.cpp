#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "oracle.hpp"
#include "wh/currents.hpp"
#include "wh/error.hpp"
#include "wh/samplers.hpp"

using namespace wh;

namespace {

Rational q(long p, long d) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

// Random weights on every non-backtracking transition of the chart.
Fsmc random_gamma_chain(const MarkedGraph& g, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<long> w(1, 6);
  std::vector<std::string> names;
  std::vector<std::vector<Rational>> rows;
  for (Edge e = 0; e < g.edge_count(); ++e) names.push_back(g.edge_id(e));
  for (Edge e = 0; e < g.edge_count(); ++e) {
    std::vector<long> raw(g.edge_count(), 0);
    long total = 0;
    for (Edge f : g.out_edges(g.terminus(e)))
      if (f != edge_inverse(e)) total += (raw[f] = w(gen));
    std::vector<Rational> row;
    for (long x : raw) row.push_back(q(x, total));
    rows.push_back(row);
  }
  return Fsmc(names, rows);
}

bool positive(const std::string& w) {
  for (char c : w)
    if (c >= 'A' && c <= 'Z') return false;
  return true;
}

}  // namespace

TEST_CASE("counting current examples") {
  const auto ab = counting_current(CyclicWord::parse("ab"), 1);
  for (const char* x : {"a", "A", "b", "B"}) CHECK(ab.weight(Word::parse(x)) == 1);
  CHECK(length_norm(ab) == 2);
  const auto aa = counting_current(CyclicWord::parse("aa"), 2);
  CHECK(aa.weight(Word::parse("aa")) == 2);
  CHECK(aa.weight(Word::parse("AA")) == 2);
  CHECK(aa.weight(Word::parse("ab")) == 0);
  CHECK(length_norm(aa) == 2);
  CHECK(length_norm(counting_current(CyclicWord::parse("abAB"), 3)) == 4);
}

TEST_CASE("counting current matches the string oracle") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const CyclicWord c = sample_uniform_cyclic(2, 1 + s % 25, s);
    const std::string w = c.str();
    const auto t = counting_current(c, 3);
    for (std::size_t k = 1; k <= 3; ++k)
      for (const auto& v : oracle::all_reduced(2, k)) {
        const long expect = static_cast<long>(oracle::occurrences(v, w) + oracle::occurrences(oracle::inverse(v), w));
        CHECK(t.weight(Word::parse(v)) == expect);
      }
  }
}

TEST_CASE("counting currents: switch, flip, norm") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const CyclicWord c = sample_uniform_cyclic(2, 1 + s % 60, mix_seed({s, 3}));
    const int depth = 1 + static_cast<int>(s % 4);
    const auto t = counting_current(c, depth);
    CHECK(check_switch(t).empty());
    CHECK(check_flip(t).empty());
    CHECK(length_norm(t) == static_cast<long>(c.size()));
  }
  const Preset l = make_preset("lollipop");
  const auto trie = make_trie(l.graph, 3);
  const Path p = l.graph->path_of_word(Word::parse("abAAB"));
  const Path closed = cyc(p);
  const auto t = counting_current(trie, closed);
  CHECK(check_switch(t).empty());
  CHECK(length_norm(t) == static_cast<long>(closed.size()));
  CHECK_THROWS_AS(counting_current(trie, Path{*l.graph->find_edge("e1")}), InvalidArgument);
}

TEST_CASE("uniform current") {
  const auto u = uniform_current(2, 3);
  const Rational expect[] = {q(1, 2), q(1, 6), q(1, 18)};
  for (int k = 1; k <= 3; ++k) {
    const auto [b, e] = u.trie().level(k);
    CHECK(e - b == 4 * static_cast<std::size_t>(std::pow(3, k - 1)));
    for (std::size_t i = b; i < e; ++i) CHECK(u.weight(i) == expect[k - 1]);
  }
  CHECK(length_norm(u) == 1);
  for (int n = 2; n <= 3; ++n)
    for (int d = 1; d <= (n == 2 ? 5 : 3); ++d) {
      const auto t = uniform_current(n, d);
      CHECK(check_switch(t).empty());
      CHECK(length_norm(t) == 1);
    }
}

TEST_CASE("characteristic currents") {
  const Preset rose = make_preset("rose2");
  for (int d = 1; d <= 5; ++d) {
    const auto c = characteristic_current(rose.chain, rose.graph, d);
    const auto u = uniform_current(2, d);
    REQUIRE(c.trie().size() == u.trie().size());
    for (std::size_t i = 0; i < c.trie().size(); ++i) {
      CHECK(c.trie().path(i) == u.trie().path(i));
      CHECK(c.weight(i) == u.weight(i));
    }
  }
  for (const auto& name : preset_names()) {
    const Preset p = make_preset(name);
    const auto t = characteristic_current(p.chain, p.graph, 4);
    CHECK(check_switch(t).empty());
    CHECK(check_flip(t).empty());
    CHECK(length_norm(t) == 1);
  }
  const Preset pos = make_preset("rose-positive");
  const auto t = characteristic_current(pos.chain, pos.graph, 3);
  for (std::size_t k = 1; k <= 3; ++k)
    for (const auto& v : oracle::all_reduced(2, k))
      CHECK((t.weight(Word::parse(v)) > 0) == (positive(v) || positive(oracle::inverse(v))));

  for (std::uint64_t s = 0; s < 20; ++s) {
    const Preset base = make_preset(s % 2 ? "chart-example2" : "rose2");
    const Fsmc chain = random_gamma_chain(*base.graph, s);
    const auto c = characteristic_current(chain, base.graph, 3);
    CHECK(length_norm(c) == 1);
    CHECK(check_switch(c).empty());
  }
  const Fsmc back({"a", "A"}, {{0, 1}, {1, 0}});
  CHECK_THROWS_AS(characteristic_current(back, rose.graph, 2), InvalidArgument);
}

TEST_CASE("table access and scaling") {
  const auto u = uniform_current(2, 2);
  CHECK(length_norm(u.scaled(3)) == 3);
  CHECK_THROWS_AS(u.weight(Path{0, 1}), InvalidArgument);
  CHECK_THROWS_AS(u.weight(Path{0, 0, 0}), InvalidArgument);
  CHECK(u.trie().find(Path{0, 1}) == PathTrie::npos);
  const std::size_t ab = u.trie().find(Path{0, 2});
  REQUIRE(ab != PathTrie::npos);
  CHECK(u.trie().path(u.trie().inverse(ab)) == Path{3, 1});
  CHECK(make_trie(u.trie().chart_ptr(), 2) == u.trie_ptr());
  const auto rows = u.dump();
  CHECK(rows.size() == 16);
  CHECK(rows[0].at("word") == "a");
  CHECK(rows[0].at("weight") == "1/2");
  const Preset chart = make_preset("chart-example2");
  const auto c = characteristic_current(chart.chain, chart.graph, 2);
  CHECK_THROWS_AS(c.weight(Word::parse("a")), InvalidArgument);
}

TEST_CASE("projective distance") {
  const auto u = uniform_current(2, 3);
  CHECK(projective_distance(u, u) == 0);
  CHECK(projective_distance(u, u.scaled(2)) == 0);
  std::vector<WeightTable> tables;
  for (std::uint64_t s = 0; s < 6; ++s) tables.push_back(counting_current(sample_uniform_cyclic(2, 40, s), 3));
  for (const auto& x : tables)
    for (const auto& y : tables) {
      CHECK(projective_distance(x, y) == projective_distance(y, x));
      for (const auto& z : tables) CHECK(projective_distance(x, z) <= projective_distance(x, y) + projective_distance(y, z));
    }
  CHECK(default_probes(u.trie()).size() == 52);
  CHECK(projective_distance(counting_current(sample_uniform_cyclic(2, 20000, 1), 3), u) <= Rational(3, 100));
}
