#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "oracle.hpp"
#include "wh/error.hpp"
#include "wh/graph.hpp"
#include "wh/samplers.hpp"

using namespace wh;

namespace {

double chi_square(const std::map<std::string, double>& counts, std::size_t cells, double expected) {
  double x = 0;
  for (const auto& [k, c] : counts) x += (c - expected) * (c - expected) / expected;
  x += static_cast<double>(cells - counts.size()) * expected;
  return x;
}

// E|W_n| for the simple walk on F_2: distance moves 0 -> 1, k -> k+1 w.p. 3/4.
double expected_drift(std::size_t n) {
  std::vector<double> p(n + 2, 0.0);
  p[0] = 1;
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<double> q(n + 2, 0.0);
    q[1] += p[0];
    for (std::size_t k = 1; k <= t; ++k) {
      q[k + 1] += 0.75 * p[k];
      q[k - 1] += 0.25 * p[k];
    }
    p = q;
  }
  double e = 0;
  for (std::size_t k = 0; k < p.size(); ++k) e += static_cast<double>(k) * p[k];
  return e;
}

}  // namespace

TEST_CASE("uniform non-backtracking sampler") {
  std::map<std::string, double> one;
  for (std::uint64_t s = 0; s < 100000; ++s) one[sample_uniform_nb(2, 1, s).str()] += 1;
  CHECK(one.size() == 4);
  // 3 degrees of freedom, 0.999 quantile 16.27.
  CHECK(chi_square(one, 4, 25000) < 16.27);

  std::map<std::string, double> three;
  for (std::uint64_t s = 0; s < 72000; ++s) {
    const Word w = sample_uniform_nb(2, 3, s);
    CHECK(w.size() == 3);
    three[w.str()] += 1;
  }
  const auto sphere = oracle::all_reduced(2, 3);
  CHECK(sphere.size() == 36);
  for (const auto& w : sphere) CHECK(three.count(w) == 1);
  CHECK(three.size() == 36);
  // 35 degrees of freedom, 0.999 quantile 66.62.
  CHECK(chi_square(three, 36, 2000) < 66.62);

  CHECK(sample_uniform_nb(3, 50, 7) == sample_uniform_nb(3, 50, 7));
  for (std::uint64_t s = 0; s < 100; ++s) {
    const CyclicWord c = sample_uniform_cyclic(2, 20, s);
    CHECK(c.size() == 20);
    CHECK(is_cyclically_reduced(c.letters()));
  }
}

TEST_CASE("biased letter sampler") {
  const std::vector<std::pair<Letter, double>> ex1{{Letter::from_char('a'), 0.1}, {Letter::from_char('b'), 0.9}};
  const Word w = sample_biased_letters(ex1, 100000, 3);
  CHECK(w.size() == 100000);
  REQUIRE(cyclic_reduce(w).cls);
  const CyclicWord c = *cyclic_reduce(w).cls;
  CHECK(c.size() == w.size());
  const double n = static_cast<double>(c.size());
  CHECK(std::abs(occurrences_cyclic(Word::parse("abb"), c) / n - 0.081) <= 0.005);
  CHECK(std::abs(occurrences_cyclic(Word::parse("aaa"), c) / n - 0.001) <= 0.001);
  CHECK(std::abs(occurrences_cyclic(Word::parse("aba"), c) / n - 0.009) <= 0.002);
  CHECK(sample_biased_letters(ex1, 500, 4) == sample_biased_letters(ex1, 500, 4));
}

TEST_CASE("group random walk") {
  const std::vector<std::pair<Word, Rational>> point{{Word::parse("a"), Rational(1)}};
  CHECK(sample_group_walk(point, 6, 1).str() == "aaaaaa");

  std::vector<std::pair<Word, Rational>> simple;
  for (const char* x : {"a", "A", "b", "B"}) simple.emplace_back(Word::parse(x), Rational(1, 4));
  const std::size_t n = 1000;
  double mean = 0;
  for (std::uint64_t s = 0; s < 300; ++s) mean += static_cast<double>(sample_group_walk(simple, n, s).size()) / 300;
  const double exact = expected_drift(n);
  CHECK(std::abs(mean - exact) <= 0.1 * exact);
  CHECK(std::abs(exact / static_cast<double>(n) - 0.5) < 0.01);

  std::vector<std::pair<Word, Rational>> longer{{Word::parse("abA"), Rational(1, 2)}, {Word::parse("bb"), Rational(1, 2)}};
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(sample_group_walk(longer, 40, s).size() <= 3 * 40);

  const std::vector<std::pair<Word, Rational>> bad{{Word::parse("a"), Rational(1, 2)}};
  CHECK_THROWS_AS(sample_group_walk(bad, 3, 1), InvalidArgument);
}

TEST_CASE("chain-directed sampler") {
  const Preset pos = make_preset("rose-positive");
  const ClosingSystem B(*pos.graph);
  const auto mu = uniform_initial(pos.chain);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto d = sample_fsmc_directed(pos.chain, *pos.graph, B, mu, ClosingMode::Hat, 50, s);
    CHECK(d.closed == d.raw);
    CHECK(d.cls.size() == 50);
    for (Letter x : d.cls.letters()) CHECK_FALSE(x.is_inverse());
  }

  const Preset rose = make_preset("rose2");
  const ClosingSystem R(*rose.graph);
  const auto ru = uniform_initial(rose.chain);
  std::vector<double> directed(9, 0), uniform(9, 0);
  const std::size_t draws = 20000;
  for (std::uint64_t s = 0; s < draws; ++s) {
    const auto d = sample_fsmc_directed(rose.chain, *rose.graph, R, ru, ClosingMode::Breve, 8, s);
    directed[d.cls.size()] += 1.0 / draws;
    const auto c = cyclic_reduce(sample_uniform_nb(2, 8, s + 7777777)).cls;
    uniform[c->size()] += 1.0 / draws;
  }
  double cd = 0, cu = 0, ks = 0;
  for (std::size_t k = 0; k <= 8; ++k) {
    cd += directed[k];
    cu += uniform[k];
    ks = std::max(ks, std::abs(cd - cu));
  }
  // Two-sample KS critical value at alpha 0.001 is about 1.95 sqrt(2/m).
  CHECK(ks < 1.95 * std::sqrt(2.0 / draws));

  const auto a = sample_fsmc_directed(rose.chain, *rose.graph, R, ru, ClosingMode::Hat, 300, 5);
  const auto b = sample_fsmc_directed(rose.chain, *rose.graph, R, ru, ClosingMode::Hat, 300, 5);
  CHECK(a.closed == b.closed);
  CHECK(a.cls == b.cls);
}

TEST_CASE("breve closings rarely lose much on tight chains") {
  const Preset rose = make_preset("rose2");
  const ClosingSystem R(*rose.graph);
  const auto mu = uniform_initial(rose.chain);
  const std::size_t n = 400, trials = 500;
  std::size_t long_enough = 0;
  for (std::uint64_t s = 0; s < trials; ++s) {
    const auto d = sample_fsmc_directed(rose.chain, *rose.graph, R, mu, ClosingMode::Breve, n, s);
    if (static_cast<double>(d.closed.size()) >= n - 2 * std::sqrt(static_cast<double>(n))) ++long_enough;
  }
  CHECK(long_enough >= trials - 2);
}
