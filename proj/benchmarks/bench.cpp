// Microbenchmarks for the hot paths: single kernel evaluations, the
// closed form against the cosine sum, a full estimate, and the centring
// integral.  Run manually: build/benchmarks/siml_bench [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include "siml/estimator.hpp"
#include "siml/kernel.hpp"
#include "siml/sampling.hpp"
#include "siml/simulate.hpp"

namespace {

using namespace siml;

void bm_dirichlet_half(benchmark::State& state) {
  const KernelOrder m(static_cast<int>(state.range(0)));
  double x = 0.0;
  for (auto _ : state) {
    x += 1e-4;
    if (x > 2.0) x = 1e-4;
    benchmark::DoNotOptimize(dirichlet_half(x, m));
  }
}
BENCHMARK(bm_dirichlet_half)->Arg(8)->Arg(64)->Arg(512);

void bm_kernel_direct_sum(benchmark::State& state) {
  const KernelOrder m(static_cast<int>(state.range(0)));
  double u = 0.1;
  for (auto _ : state) {
    u += 1e-4;
    if (u > 1.0) u = 1e-4;
    benchmark::DoNotOptimize(kernel_direct_sum(u, 0.37, m));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_kernel_direct_sum)->Arg(8)->Arg(64)->Arg(512);

void bm_kernel_closed_form(benchmark::State& state) {
  const KernelOrder m(static_cast<int>(state.range(0)));
  double u = 0.1;
  for (auto _ : state) {
    u += 1e-4;
    if (u > 1.0) u = 1e-4;
    benchmark::DoNotOptimize(kernel_closed_form(u, 0.37, m));
  }
}
BENCHMARK(bm_kernel_closed_form)->Arg(8)->Arg(64)->Arg(512);

void bm_estimate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  Matrix sigma(1, 1);
  sigma(0, 0) = 0.2;
  const PathModel model = PathModel::constant(sigma);
  const FinePath path = simulate_fine(model, n, 2026);
  const TimeGrid grid = make_uniform_grid(n);
  const ObservationSet obs = observe(path, {grid});
  const SimlConfig cfg{KernelOrder(m), {sampling_map(grid, SchemeRule::ksss)}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(siml_general(obs, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n) * m);
}
BENCHMARK(bm_estimate)->Args({1024, 32})->Args({8192, 36})->Args({8192, 64});

void bm_centring_integral(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SamplingMap map = sampling_map(make_uniform_grid(n), SchemeRule::left);
  const KernelOrder m(static_cast<int>(state.range(1)));
  const ScalarIntegrand g = ScalarIntegrand::constant(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonal_integral(m, map, map, g));
  }
}
BENCHMARK(bm_centring_integral)->Args({512, 128})->Args({2048, 32});

}  // namespace

BENCHMARK_MAIN();
