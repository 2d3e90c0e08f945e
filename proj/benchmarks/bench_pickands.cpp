#include <benchmark/benchmark.h>

#include "chix/pickands.hpp"

using namespace chix;

static void BM_PickandsContinuous(benchmark::State& state) {
  PickandsParams p;
  p.alpha = 1.0;
  p.a = 1.0;
  p.eta = 0.0;
  p.inner_step = 0.02;
  p.s_ladder = {4.0, 6.0, 8.0};
  p.n_rep = static_cast<std::uint64_t>(state.range(0));
  p.n_threads = 1;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    PickandsEstimate est = estimate_pickands(p, seed++);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(p.n_rep));
}
BENCHMARK(BM_PickandsContinuous)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_PickandsLattice(benchmark::State& state) {
  PickandsParams p;
  p.alpha = 1.0;
  p.a = 1.0;
  p.eta = 2.0;
  p.n_rep = static_cast<std::uint64_t>(state.range(0));
  p.n_threads = 1;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    PickandsEstimate est = estimate_pickands(p, seed++);
    benchmark::DoNotOptimize(est.value);
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                          static_cast<int64_t>(p.n_rep));
}
BENCHMARK(BM_PickandsLattice)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
