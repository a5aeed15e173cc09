/* Copyright 2026 The bipv-assess Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "bipv/area.hpp"
#include "bipv/mask.hpp"
#include "bipv/metrics.hpp"
#include "bipv/solar.hpp"

namespace bipv {
namespace {

// Blocky roof-like mask at the full tile size.
Bitmap roofs(std::uint32_t seed, std::int64_t side, double density) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution fg(density);
  Bitmap b{side, side, std::vector<std::uint8_t>(static_cast<std::size_t>(side * side), 0)};
  constexpr std::int64_t kBlock = 24;
  for (std::int64_t r = 0; r < side; r += kBlock) {
    for (std::int64_t c = 0; c < side; c += kBlock) {
      if (!fg(rng)) continue;
      for (std::int64_t y = r; y < std::min(side, r + kBlock); ++y) {
        for (std::int64_t x = c; x < std::min(side, c + kBlock); ++x) {
          b.bits[static_cast<std::size_t>(y * side + x)] = 1;
        }
      }
    }
  }
  return b;
}

void BM_RleUnion(benchmark::State& state) {
  const RleMask a = rle_encode(roofs(1, 1389, 0.3));
  const RleMask b = rle_encode(roofs(2, 1389, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(mask_union(a, b));
}
BENCHMARK(BM_RleUnion);

void BM_RleEncode(benchmark::State& state) {
  const Bitmap a = roofs(3, 1389, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(rle_encode(a));
}
BENCHMARK(BM_RleEncode);

void BM_Confusion(benchmark::State& state) {
  const RleMask a = rle_encode(roofs(4, 1389, 0.3));
  const RleMask b = rle_encode(roofs(5, 1389, 0.3));
  for (auto _ : state) benchmark::DoNotOptimize(confusion(a, b));
}
BENCHMARK(BM_Confusion);

void BM_AggregateAreas(benchmark::State& state) {
  const int tiles = static_cast<int>(state.range(0));
  DatasetManifest manifest;
  manifest.name = "bench";
  std::vector<TilePrediction> preds;
  for (int i = 0; i < tiles; ++i) {
    const std::string id = "t" + std::to_string(i);
    manifest.tiles.push_back({id, 256, 256, 96, 5000, std::nullopt, std::nullopt});
    TilePrediction p{id, {{std::nullopt, 0.5, rle_encode(roofs(10 * i, 256, 0.5)), std::nullopt}}};
    for (int c = 1; c <= 5; ++c) {
      p.instances.push_back({static_cast<BuildingCategory>(c), 0.5,
                             rle_encode(roofs(10 * i + c, 256, 0.1)), std::nullopt});
    }
    preds.push_back(std::move(p));
  }
  const ThresholdSet th = ThresholdSet::uniform(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(aggregate_areas(preds, manifest, th, 1));
  state.SetItemsProcessed(state.iterations() * tiles);
}
BENCHMARK(BM_AggregateAreas)->Arg(16)->Arg(64);

void BM_AnnualYield(benchmark::State& state) {
  const WeatherSeries series = synthetic_weather(2022, 36.8, 118.05, 8, 2022);
  const SurfaceConfig cfg =
      default_surface_config({BuildingCategory::kApartment, BipvType::kFacade}, 36.8);
  const PanelSpec panel;
  for (auto _ : state) {
    benchmark::DoNotOptimize(annual_yield(series, cfg, panel, 36.8, 118.05));
  }
}
BENCHMARK(BM_AnnualYield)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace bipv

BENCHMARK_MAIN();
