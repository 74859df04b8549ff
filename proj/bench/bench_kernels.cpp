// Serial reference vs chunked OpenMP kernels on simulated paths.

#include <benchmark/benchmark.h>

#include <cmath>

#include "haarwalk/kernels.hpp"
#include "haarwalk/levy.hpp"

using namespace haarwalk;

namespace {

// Exact path with many jumps (irrational rotation) or a Brownian grid path.
const RealLevyPath& path_for(int kind) {
  static const RealLevyPath rotation = [] {
    LevyTriple t;
    t.nu = {{(std::sqrt(5.0) - 1) / 2, 1.0}};
    return simulate_real_levy(t, 1e6, 0.0, 42);
  }();
  static const RealLevyPath brownian = [] {
    LevyTriple t;
    t.sigma2 = 1.0;
    return simulate_real_levy(t, 1e4, 1e-3, 42);
  }();
  return kind == 0 ? rotation : brownian;
}

const double kLambdas[] = {2 * M_PI, 4 * M_PI, 6 * M_PI, 8 * M_PI, 10 * M_PI};

void BM_ExponentialSerial(benchmark::State& state) {
  const auto& p = path_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::exponential_integrals_serial(p, kLambdas, 0.0, p.horizon));
}

void BM_ExponentialParallel(benchmark::State& state) {
  const auto& p = path_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::exponential_integrals_parallel(p, kLambdas, 0.0, p.horizon));
}

void BM_HistogramSerial(benchmark::State& state) {
  const auto& p = path_for(static_cast<int>(state.range(0)));
  const auto part = make_torus_partition(1000);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::torus_histogram_serial(p, part, 0.0, p.horizon));
}

void BM_HistogramParallel(benchmark::State& state) {
  const auto& p = path_for(static_cast<int>(state.range(0)));
  const auto part = make_torus_partition(1000);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::torus_histogram_parallel(p, part, 0.0, p.horizon));
}

}  // namespace

// Argument: 0 = exact rotation path (1e6 jumps), 1 = Brownian grid (1e7 cells).
BENCHMARK(BM_ExponentialSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExponentialParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HistogramSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HistogramParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
