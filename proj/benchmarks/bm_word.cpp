#include <benchmark/benchmark.h>

#include "wh/samplers.hpp"
#include "wh/word.hpp"

namespace {

void BM_CanonicalRotation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const wh::Word w = wh::sample_uniform_cyclic(2, n, 1).word();
  for (auto _ : state) benchmark::DoNotOptimize(wh::canonical_rotation(w.letters()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CanonicalRotation)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity(benchmark::oN);

void BM_FreeReduce(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<wh::Letter> raw;
  wh::CounterRng rng(3);
  for (std::size_t i = 0; i < n; ++i) raw.push_back(wh::Letter::from_code(static_cast<std::uint8_t>(rng.below(4))));
  for (auto _ : state) benchmark::DoNotOptimize(wh::free_reduce(raw));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FreeReduce)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity(benchmark::oN);

void BM_UniformSampler(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(wh::sample_uniform_nb(2, static_cast<std::size_t>(state.range(0)), seed++));
}
BENCHMARK(BM_UniformSampler)->Arg(1000)->Arg(100000);

}  // namespace


BENCHMARK_MAIN();
