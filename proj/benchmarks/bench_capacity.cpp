#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bosonic/allocator.hpp"
#include "bosonic/closedform.hpp"
#include "bosonic/kernels.hpp"

namespace {

using namespace bosonic;

void BM_ThermalEntropy(benchmark::State& state) {
  double x = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(thermal_entropy(x));
    x = x * 1.0001 + 1e-9;
    if (x > 1e6) x = 1e-6;
  }
}
BENCHMARK(BM_ThermalEntropy);

void BM_ThermalEntropyInverse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(thermal_entropy_inverse(3.7));
}
BENCHMARK(BM_ThermalEntropyInverse);

// Far-field quadratic-eta grid, the workload behind the discrete cross-check.
std::vector<ModeSpec> farfield_grid(std::size_t n) {
  std::vector<ModeSpec> modes(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k + 1) / static_cast<double>(n);
    modes[k] = {t, 0.01 * t * t};
  }
  return modes;
}

void BM_SolveBeta(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto modes = farfield_grid(n);
  const auto budget = ResourceBudget::energy_per_use(3.0 * static_cast<double>(n) / 0.01);
  const auto det = static_cast<Detection>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve_beta(modes, budget, det).beta);
}
BENCHMARK(BM_SolveBeta)->ArgsProduct({{100, 1000, 10000}, {0, 1}})->Unit(benchmark::kMicrosecond);

void BM_SolveFarField(benchmark::State& state) {
  const auto det = static_cast<Detection>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_farfield(3.0, det).normalized_rate);
}
BENCHMARK(BM_SolveFarField)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_FlatLadder(benchmark::State& state) {
  const double m = static_cast<double>(state.range(0));
  const auto budget = ResourceBudget::energy_per_use(2.0 * M_PI * m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flat_ladder_capacity({0.5, 1.0 / m}, budget, Detection::Holevo).result.value);
  }
}
BENCHMARK(BM_FlatLadder)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
