#include <benchmark/benchmark.h>

#include "tnfin/glcm.hpp"
#include "tnfin/rng.hpp"

namespace {

tnfin::glcm::RawImage random_raw(std::size_t side, tnfin::Rng& rng) {
  tnfin::glcm::RawImage img;
  img.width = side;
  img.height = side;
  img.channels = 1;
  img.pixels.resize(side * side);
  for (auto& p : img.pixels) {
    p = static_cast<std::uint8_t>(rng.uniform_index(256));
  }
  return img;
}

void BM_Preprocess(benchmark::State& state) {
  tnfin::Rng rng(3);
  const auto raw = random_raw(512, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tnfin::glcm::preprocess(raw, {224, 8}));
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_GlcmAndFeatures(benchmark::State& state) {
  tnfin::Rng rng(4);
  const auto gray = tnfin::glcm::preprocess(random_raw(512, rng), {224, 8});
  for (auto _ : state) {
    const auto glcm = tnfin::glcm::compute_glcm(gray, {0, 1});
    benchmark::DoNotOptimize(tnfin::glcm::extract_features(glcm, gray));
  }
  state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK(BM_Preprocess)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GlcmAndFeatures)->Unit(benchmark::kMicrosecond);
