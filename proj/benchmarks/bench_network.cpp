#include <benchmark/benchmark.h>

#include "tnfin/network.hpp"
#include "tnfin/rng.hpp"

namespace {

tnfin::TnfinNetwork make_network(std::size_t inputs, std::size_t mfs,
                                 tnfin::Rng& rng) {
  std::vector<tnfin::Interval> ranges(inputs, tnfin::Interval{0.0, 1.0});
  return tnfin::TnfinNetwork::initialized(inputs, mfs, ranges,
                                          tnfin::Interval{0.0, 1.0}, rng);
}

void BM_Forward(benchmark::State& state) {
  const auto inputs = static_cast<std::size_t>(state.range(0));
  const auto mfs = static_cast<std::size_t>(state.range(1));
  tnfin::Rng rng(1);
  const auto net = make_network(inputs, mfs, rng);
  std::vector<double> x(inputs);
  for (auto& v : x) v = rng.uniform(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.evaluate(x));
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_Loss600(benchmark::State& state) {
  const auto mfs = static_cast<std::size_t>(state.range(0));
  tnfin::Rng rng(2);
  const auto net = make_network(6, mfs, rng);
  tnfin::TrainingSet data;
  for (int i = 0; i < 600; ++i) {
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform(0.0, 1.0);
    data.x.push_back(std::move(x));
    data.target.push_back(rng.uniform(0.0, 1.0));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(tnfin::loss(net, data));
  }
}

}  // namespace

BENCHMARK(BM_Forward)->Args({6, 2})->Args({6, 3})->Args({2, 3});
BENCHMARK(BM_Loss600)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
