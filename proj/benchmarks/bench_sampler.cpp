#include <benchmark/benchmark.h>

#include "chix/gaussian_sim.hpp"

using namespace chix;

static void BM_FbmCirculantPath(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Grid g = make_uniform_grid(0.0, 0.01, n);
  FbmSampler sampler(1.5, g, FbmSampler::Method::Circulant);
  FbmSampler::Workspace ws;
  std::vector<double> path(n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    RngStream s(1, stream_id(1, rep++));
    sampler.sample_path(s, path.data(), ws);
    benchmark::DoNotOptimize(path.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}
BENCHMARK(BM_FbmCirculantPath)->Arg(256)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_FbmBrownianPath(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Grid g = make_uniform_grid(0.0, 0.01, n);
  FbmSampler sampler(1.0, g);
  FbmSampler::Workspace ws;
  std::vector<double> path(n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    RngStream s(1, stream_id(2, rep++));
    sampler.sample_path(s, path.data(), ws);
    benchmark::DoNotOptimize(path.data());
  }
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}
BENCHMARK(BM_FbmBrownianPath)->Arg(1024)->Arg(16384);

static void BM_CholeskySample(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Grid g = make_uniform_grid(0.0, 1.0 / static_cast<double>(n), n);
  CholeskyFactor f = cholesky_factor(build_cov_matrix(ou_kernel(1.0, 0.0, 1.0), g));
  std::vector<double> out(n);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    RngStream s(1, stream_id(3, rep++));
    f.sample(s, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_CholeskySample)->Arg(13)->Arg(21)->Arg(64)->Arg(256);

static void BM_CholeskyFactor(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Grid g = make_uniform_grid(0.0, 1.0 / static_cast<double>(n), n);
  SymMatrix m = build_cov_matrix(ou_kernel(1.0, 0.0, 1.0), g);
  for (auto _ : state) {
    CholeskyFactor f = cholesky_factor(m);
    benchmark::DoNotOptimize(f.l.data());
  }
}
BENCHMARK(BM_CholeskyFactor)->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
