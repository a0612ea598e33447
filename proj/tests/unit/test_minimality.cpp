#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracle.hpp"
#include "wh/error.hpp"
#include "wh/minimality.hpp"
#include "wh/rng.hpp"
#include "wh/samplers.hpp"

using namespace wh;

namespace {

const MoveSet& W2() { return MoveSet::for_rank(2); }

bool oracle_strictly_minimal(const std::string& c) {
  std::set<std::string> first;
  for (const auto& f : oracle::relabelings(2)) first.insert(f.key());
  for (const auto& f : oracle::whitehead_auts(2)) {
    if (first.count(f.key()) || oracle::is_inner(f)) continue;
    if (oracle::canon(oracle::apply(f, c)).size() <= c.size()) return false;
  }
  return true;
}

CyclicWord strictly_minimal_sample(std::size_t n, std::uint64_t seed) {
  CyclicWord c = sample_uniform_cyclic(2, n, seed);
  while (!is_strictly_minimal(W2(), c)) c = sample_uniform_cyclic(2, n, ++seed);
  return c;
}

// Smallest ratio, as a fraction, of a non-inner move taking c outside `inside`.
Rational min_escape_ratio(const CyclicWord& c, const std::set<CyclicWord>& inside) {
  std::optional<Rational> best;
  for (const auto& e : W2().entries()) {
    if (e.inner) continue;
    const CyclicWord v = e.move.apply(c);
    if (inside.count(v)) continue;
    Rational r(static_cast<unsigned long>(v.size()), static_cast<unsigned long>(c.size()));
    r.canonicalize();
    if (!best || r < *best) best = r;
  }
  return *best;
}

}  // namespace

TEST_CASE("strict minimality matches exhaustive move application") {
  CHECK_FALSE(is_strictly_minimal(W2(), CyclicWord::parse("abAB")) !=
              oracle_strictly_minimal("abAB"));
  for (std::size_t n = 1; n <= 6; ++n)
    for (const auto& c : cyclic_classes(2, n)) CHECK(is_strictly_minimal(W2(), c) == oracle_strictly_minimal(c.str()));
}

TEST_CASE("parameter validation") {
  MleParams p;
  p.M = 0;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = MleParams{1, Rational(1), Rational(0)};
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = MleParams{1, Rational(3, 2), Rational(1, 2)};
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = MleParams{1, Rational(11, 10), Rational(1, 20)};
  p.validate();
  CHECK_FALSE(p.detector_admissible());
  CHECK_THROWS_AS(detect_mlew(W2(), CyclicWord::parse("ab"), p), InvalidArgument);
  CHECK(MleParams{}.detector_admissible());
}

TEST_CASE("detector on a sampled strictly minimal word") {
  const CyclicWord c = strictly_minimal_sample(60, 3);
  const auto lc = level_component(W2(), c);
  const std::set<CyclicWord> comp(lc.vertices.begin(), lc.vertices.end());
  Rational lambda = min_escape_ratio(c, comp);
  for (const auto& v : lc.vertices) lambda = std::min(lambda, min_escape_ratio(v, comp));
  REQUIRE(lambda > 1);
  // eps below 1/n keeps admissible steps inside the level set.
  const Rational eps(1, 2 * static_cast<unsigned long>(c.size()));
  MleParams p{static_cast<int>(lc.vertices.size()), lambda, eps};
  REQUIRE(p.detector_admissible());
  const auto d = detect_mlew(W2(), c, p);
  CHECK(d.minimal);
  CHECK(std::set<CyclicWord>(d.set.begin(), d.set.end()) == comp);
  CHECK(verify_minimizing_set(W2(), d.set, p, MleMode::MLEW).ok);

  MleParams tighter = p;
  tighter.lambda = lambda + Rational(1, 1000);
  const auto f = detect_mlew(W2(), c, tighter);
  CHECK_FALSE(f.minimal);
  REQUIRE(f.failure);
  CHECK(f.failure->condition == 4);

  MleParams small = p;
  small.M = static_cast<int>(lc.vertices.size()) - 1;
  const auto g = detect_mlew(W2(), c, small);
  CHECK_FALSE(g.minimal);
  CHECK(g.failure->condition == 1);
}

TEST_CASE("detector set does not depend on the seed member") {
  std::size_t checked = 0;
  const MleParams p{8, Rational(21, 20), Rational(1, 100)};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const CyclicWord c = minimize(W2(), sample_uniform_cyclic(2, 40, seed)).result;
    const auto d = detect_mlew(W2(), c, p);
    if (!d.minimal) continue;
    ++checked;
    for (const auto& u : d.set) {
      const auto e = detect_mlew(W2(), u, p);
      CHECK(e.minimal);
      CHECK(e.set == d.set);
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("abAB with M=4") {
  const MleParams p{4, Rational(3, 2), Rational(1, 10)};
  const auto d = detect_mlew(W2(), CyclicWord::parse("abAB"), p);
  const MleParams q{4, Rational(13, 10), Rational(1, 10)};
  if (d.minimal) CHECK(verify_minimizing_set(W2(), d.set, q, MleMode::MLE).ok);
  CHECK(std::find(d.set.begin(), d.set.end(), CyclicWord::parse("abAB")) != d.set.end());
}

TEST_CASE("verification conditions") {
  const CyclicWord c = strictly_minimal_sample(60, 11);
  const auto lc = level_component(W2(), c);
  const std::set<CyclicWord> comp(lc.vertices.begin(), lc.vertices.end());
  std::vector<CyclicWord> S(lc.vertices.begin(), lc.vertices.end());
  S.push_back(S.front());
  Rational lambda = min_escape_ratio(c, comp);
  for (const auto& v : lc.vertices) lambda = std::min(lambda, min_escape_ratio(v, comp));
  const MleParams p{static_cast<int>(comp.size()), lambda, Rational(0)};
  CHECK(verify_minimizing_set(W2(), S, p, MleMode::MLEW).ok);

  const auto band = verify_minimizing_set(W2(), {CyclicWord::parse("a"), CyclicWord::parse("aab")},
                                          MleParams{2, Rational(3, 2), Rational(1, 10)}, MleMode::MLEW);
  CHECK_FALSE(band.ok);
  CHECK(std::any_of(band.violations.begin(), band.violations.end(), [](const MleViolation& v) { return v.condition == 3; }));

  const auto orbit = verify_minimizing_set(W2(), {CyclicWord::parse("a"), CyclicWord::parse("abAB")},
                                           MleParams{2, Rational(5, 1), Rational(3, 1)}, MleMode::MLEW);
  CHECK(std::any_of(orbit.violations.begin(), orbit.violations.end(), [](const MleViolation& v) { return v.condition == 2; }));

  const auto count = verify_minimizing_set(W2(), {CyclicWord::parse("a"), CyclicWord::parse("b")},
                                           MleParams{1, Rational(3, 2), Rational(1, 10)}, MleMode::MLEW);
  CHECK(std::any_of(count.violations.begin(), count.violations.end(), [](const MleViolation& v) { return v.condition == 1; }));

  CHECK_THROWS_AS(verify_minimizing_set(W2(), {}, MleParams{}, MleMode::MLE), InvalidArgument);
}

TEST_CASE("detector pass implies brute-force pass on short words") {
  const MleParams detector{4, Rational(2), Rational(1, 10)};
  const MleParams target{4, Rational(3, 2), Rational(1, 10)};
  REQUIRE(detector.lambda * (1 - detector.epsilon) > target.lambda);
  std::size_t passes = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& c : cyclic_classes(2, n)) {
      const auto d = detect_mlew(W2(), c, detector);
      if (!d.minimal) continue;
      ++passes;
      CHECK(verify_minimizing_set(W2(), d.set, target, MleMode::MLE).ok);
    }
  CHECK(passes > 0);
}

TEST_CASE("verified sets absorb short images and contain the minimal classes") {
  const MleParams p{8, Rational(21, 20), Rational(1, 100)};
  std::size_t verified = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const CyclicWord c = minimize(W2(), sample_uniform_cyclic(2, 40, seed)).result;
    const auto d = detect_mlew(W2(), c, p);
    if (!d.minimal || !verify_minimizing_set(W2(), d.set, p, MleMode::MLE).ok) continue;
    ++verified;
    const std::set<CyclicWord> S(d.set.begin(), d.set.end());
    for (const auto& m : level_component(W2(), c).vertices) CHECK(S.count(m) == 1);
    CounterRng rng(seed, 7);
    for (const auto& u : d.set)
      for (int t = 0; t < 50; ++t) {
        CyclicWord v = u;
        const int k = 1 + static_cast<int>(rng.below(3));
        for (int i = 0; i < k; ++i) v = W2()[rng.below(W2().size())].move.apply(v);
        if (Rational(static_cast<unsigned long>(v.size())) <= (1 + p.epsilon) * static_cast<unsigned long>(u.size()))
          CHECK(S.count(v) == 1);
      }
  }
  CHECK(verified > 0);
}

TEST_CASE("distortion on the uniform current") {
  DistortionOptions opt;
  opt.samples = 200;
  const auto est = estimate_distortion(
      W2(), [](std::size_t i) { return sample_uniform_cyclic(2, 2000, mix_seed({5, i})); }, opt);
  CHECK(est.J == doctest::Approx(1.0));
  std::size_t first_kind_in_min = 0;
  for (std::size_t i : est.minimizing)
    if (est.stats[i].first_kind_only && est.stats[i].moves.size() == 1) ++first_kind_in_min;
  CHECK(first_kind_in_min == 7);
  for (const auto& s : est.stats) {
    CHECK(s.mean > 0);
    if (s.moves.size() == 1 && !s.first_kind_only) CHECK(s.mean >= 7.0 / 6.0 - 0.02);
  }
  REQUIRE(est.lambda);
  CHECK(*est.lambda > 1);
  CHECK_THROWS_AS(estimate_distortion(W2(), [](std::size_t) { return CyclicWord::parse("a"); },
                                      DistortionOptions{1, 0}),
                  InvalidArgument);
}

TEST_CASE("distortion on a rational current is exact") {
  const CyclicWord w = CyclicWord::parse("aabAbbABaB");
  DistortionOptions opt;
  opt.samples = 5;
  const auto est = estimate_distortion(W2(), [&](std::size_t) { return w; }, opt);
  for (const auto& s : est.stats) {
    CyclicWord img = w;
    for (std::size_t m : s.moves) img = W2()[m].move.apply(img);
    CHECK(s.mean == doctest::Approx(static_cast<double>(img.size()) / static_cast<double>(w.size())));
    CHECK(s.sd == doctest::Approx(0.0));
    CHECK(s.below_floor);
  }
}
