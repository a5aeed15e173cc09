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

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bipv/mask.hpp"
#include "bipv/types.hpp"

namespace bipv {

// Rooftop areas per building category plus the all-buildings total.
struct CategoryAreas {
  std::array<double, kNumCategories> area_m2{};
  double all_buildings_m2 = 0.0;

  double& operator[](BuildingCategory c) { return area_m2[category_index(c)]; }
  double operator[](BuildingCategory c) const { return area_m2[category_index(c)]; }
  double category_total() const;

  bool operator==(const CategoryAreas&) const = default;
};

// A_i = pixel_count * S.
double category_area(std::int64_t pixel_count, double pixel_area_m2);

struct OthersArea {
  double area_m2 = 0.0;
  // P_b - sum(P_i) before clamping; negative means the category masks
  // over-cover the all-buildings mask.
  std::int64_t raw_residual_px = 0;
  bool overlap_warning = false;
};

// A_6 = max(0, P_b - sum(P_1..5)) * S.
OthersArea others_area(std::int64_t all_buildings_px,
                       std::span<const std::int64_t, kNumMeasuredCategories> category_px,
                       double pixel_area_m2);

// Box thresholds per stream. The Others slot applies to the all-buildings
// stream, which is the only input Others has.
struct ThresholdSet {
  std::array<double, kNumCategories> value{};

  static ThresholdSet uniform(double t);
  double operator[](BuildingCategory c) const { return value[category_index(c)]; }
  double& operator[](BuildingCategory c) { return value[category_index(c)]; }
  double all_buildings() const { return (*this)[BuildingCategory::kOthers]; }

  bool operator==(const ThresholdSet&) const = default;
};

ThresholdSet parse_thresholds(const nlohmann::json& doc, const std::string& where);
nlohmann::json thresholds_to_json(const ThresholdSet& t);

// Pixel accounting for one tile.
struct TilePixels {
  std::array<std::int64_t, kNumMeasuredCategories> category_px{};
  std::int64_t all_buildings_px = 0;
  // sum over categories of |P_i & P_b|; what the Others residual subtracts.
  std::int64_t clipped_category_px = 0;
  std::int64_t others_px = 0;
  bool overlap_warning = false;
};

TilePixels tile_pixels(const TilePrediction& pred, const TileMeta& tile,
                       const ThresholdSet& thresholds);

// Integer pixel totals grouped by pixel area, so merging is exact and
// independent of tile order.
class AreaAccumulator {
 public:
  void add(const TilePixels& px, double pixel_area_m2);
  void merge(const AreaAccumulator& other);

  CategoryAreas areas() const;
  std::int64_t overlap_warnings() const { return overlap_warnings_; }
  std::int64_t tiles() const { return tiles_; }
  // Pixels per category (Others included), summed across scales.
  std::array<std::int64_t, kNumCategories> category_pixels() const;

  bool operator==(const AreaAccumulator&) const = default;

 private:
  struct Bucket {
    std::array<std::int64_t, kNumCategories> category_px{};
    std::int64_t all_buildings_px = 0;
    bool operator==(const Bucket&) const = default;
  };
  std::map<double, Bucket> buckets_;
  std::int64_t overlap_warnings_ = 0;
  std::int64_t tiles_ = 0;
};

struct AreaSummary {
  CategoryAreas areas;
  std::int64_t overlap_warnings = 0;
  std::int64_t tiles = 0;
  // Tile ids whose Others residual went negative, sorted.
  std::vector<std::string> overlap_tiles;
};

// City totals over all predicted tiles. Throws MissingInputError for a tile
// absent from the manifest.
AreaSummary aggregate_areas(std::span<const TilePrediction> preds,
                            const DatasetManifest& manifest,
                            const ThresholdSet& thresholds, int jobs = 1);

inline constexpr std::string_view kAreasCsvHeader = "category,total_rooftop_m2";

std::string areas_csv(const AreaSummary& summary);
nlohmann::json areas_json(const AreaSummary& summary);

}  // namespace bipv
