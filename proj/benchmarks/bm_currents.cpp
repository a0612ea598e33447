#include <benchmark/benchmark.h>

#include "wh/currents.hpp"
#include "wh/fsmc.hpp"
#include "wh/graph.hpp"
#include "wh/samplers.hpp"

namespace {

void BM_CountingCurrent(benchmark::State& state) {
  const auto c = wh::sample_uniform_cyclic(2, static_cast<std::size_t>(state.range(0)), 4);
  const int depth = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(wh::counting_current(c, depth));
}
BENCHMARK(BM_CountingCurrent)->ArgsProduct({{1000, 100000}, {2, 4}});

void BM_CharacteristicCurrent(benchmark::State& state) {
  const auto p = wh::make_preset("chart-example2");
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(wh::characteristic_current(p.chain, p.graph, depth));
}
BENCHMARK(BM_CharacteristicCurrent)->DenseRange(2, 5);

void BM_Stationary(benchmark::State& state) {
  const auto p = wh::make_preset("lollipop", static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wh::stationary(p.chain));
}
BENCHMARK(BM_Stationary)->DenseRange(2, 5);

void BM_DirectedSample(benchmark::State& state) {
  const auto p = wh::make_preset("lollipop");
  const wh::ClosingSystem B(*p.graph);
  const auto mu = wh::uniform_initial(p.chain);
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(wh::sample_fsmc_directed(p.chain, *p.graph, B, mu, wh::ClosingMode::Breve,
                                                      static_cast<std::size_t>(state.range(0)), seed++));
}
BENCHMARK(BM_DirectedSample)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
