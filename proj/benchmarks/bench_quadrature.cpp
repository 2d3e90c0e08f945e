#include <benchmark/benchmark.h>

#include <cmath>

#include "chix/pickands_table.hpp"
#include "chix/scanstat.hpp"
#include "chix/sphere.hpp"
#include "chix/tail_asymptotics.hpp"

using namespace chix;

namespace {

PickandsTable synthetic_table() {
  std::vector<PickandsTable::Node> nodes;
  for (double ep = 1.5; ep <= 7.01; ep += 0.25) {
    PickandsTable::Node nd;
    nd.eta_prime = ep;
    nd.h = 0.45 / (0.3 + ep);
    nodes.push_back(nd);
  }
  return PickandsTable::from_nodes(1.0, 1.0, std::move(nodes));
}

}  // namespace

static void BM_SphereIntegralN2(benchmark::State& state) {
  auto f = [](const std::vector<double>& v) {
    return 1.0 / (1.0 + v[0] * v[0] + 0.5 * v[1] * v[1]);
  };
  for (auto _ : state) {
    SphereIntegral si = sphere_integral(2, f, static_cast<std::size_t>(state.range(0)));
    benchmark::DoNotOptimize(si.value);
  }
}
BENCHMARK(BM_SphereIntegralN2)->Arg(64)->Arg(256)->Arg(1024);

static void BM_ScanPvalueFormula(benchmark::State& state) {
  PickandsTable table = synthetic_table();
  ScanWindow w{0.2, 0.8, 20.0};
  for (auto _ : state) {
    ScanReport rep = pvalue_formula(w, table);
    benchmark::DoNotOptimize(rep.conv_b.probability);
  }
}
BENCHMARK(BM_ScanPvalueFormula)->Unit(benchmark::kMillisecond);

static void BM_AdaptiveTimeQuadrature(benchmark::State& state) {
  auto f = [](double t) { return 1.0 / (t * (1.0 - t)); };
  for (auto _ : state) {
    const double v = integrate_adaptive(f, 0.2, 0.8, 1e-6, 18);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_AdaptiveTimeQuadrature);

BENCHMARK_MAIN();
