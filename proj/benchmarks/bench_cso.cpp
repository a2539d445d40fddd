#include <benchmark/benchmark.h>

#include "tnfin/cso.hpp"

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v * v;
  return s;
}

void BM_CsoSphere(benchmark::State& state) {
  const auto iterations = static_cast<std::size_t>(state.range(0));
  const std::vector<tnfin::Interval> bounds(10, tnfin::Interval{-5.0, 5.0});
  for (auto _ : state) {
    tnfin::cso::CsoConfig config;
    config.iterations = iterations;
    config.seed = 11;
    benchmark::DoNotOptimize(tnfin::cso::minimize(sphere, 10, bounds, config));
  }
  state.SetItemsProcessed(state.iterations() * iterations);
}

}  // namespace

BENCHMARK(BM_CsoSphere)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
