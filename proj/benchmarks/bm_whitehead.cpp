#include <benchmark/benchmark.h>

#include "wh/minimality.hpp"
#include "wh/samplers.hpp"
#include "wh/whitehead.hpp"

namespace {

const wh::MoveSet& W2() { return wh::MoveSet::for_rank(2); }

wh::CyclicWord distorted(std::size_t n) {
  wh::CyclicWord c = wh::sample_uniform_cyclic(2, n, 11);
  for (std::size_t k : {8, 13, 17}) c = W2()[k].move.apply(c);
  return c;
}

void BM_ImageLength(benchmark::State& state) {
  const auto c = wh::sample_uniform_cyclic(2, static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state)
    for (const auto& e : W2().entries()) benchmark::DoNotOptimize(e.move.image_length(c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ImageLength)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oN);

void BM_Minimize(benchmark::State& state) {
  const auto c = distorted(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wh::minimize(W2(), c));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Minimize)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

void BM_Equivalent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = wh::sample_uniform_cyclic(2, n, 21);
  const auto b = W2()[3].move.apply(W2()[9].move.apply(a));
  for (auto _ : state) benchmark::DoNotOptimize(wh::equivalent(W2(), a, b));
}
BENCHMARK(BM_Equivalent)->Arg(100)->Arg(1000)->Arg(10000);

void BM_DetectMlew(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  auto c = wh::sample_uniform_cyclic(2, n, seed);
  while (!wh::is_strictly_minimal(W2(), c)) c = wh::sample_uniform_cyclic(2, n, ++seed);
  wh::Rational lambda(21, 20), eps(1, 100);
  const wh::MleParams p{8, lambda, eps};
  for (auto _ : state) benchmark::DoNotOptimize(wh::detect_mlew(W2(), c, p));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DetectMlew)->RangeMultiplier(10)->Range(100, 100000)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
