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

#include "bipv/area.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"
#include "bipv/parallel.hpp"
#include "json_util.hpp"

namespace bipv {

double CategoryAreas::category_total() const {
  return std::accumulate(area_m2.begin(), area_m2.end(), 0.0);
}

double category_area(std::int64_t pixel_count, double pixel_area_m2) {
  if (pixel_count < 0) {
    throw InvalidParameter(fmt::format("negative pixel count {}", pixel_count));
  }
  if (!(pixel_area_m2 > 0.0)) {
    throw InvalidParameter(fmt::format("pixel area {} must be positive", pixel_area_m2));
  }
  return static_cast<double>(pixel_count) * pixel_area_m2;
}

OthersArea others_area(std::int64_t all_buildings_px,
                       std::span<const std::int64_t, kNumMeasuredCategories> category_px,
                       double pixel_area_m2) {
  if (all_buildings_px < 0) {
    throw InvalidParameter(fmt::format("negative pixel count {}", all_buildings_px));
  }
  std::int64_t sum = 0;
  for (std::int64_t p : category_px) {
    if (p < 0) throw InvalidParameter(fmt::format("negative pixel count {}", p));
    sum += p;
  }
  OthersArea out;
  out.raw_residual_px = all_buildings_px - sum;
  out.overlap_warning = out.raw_residual_px < 0;
  out.area_m2 = category_area(std::max<std::int64_t>(0, out.raw_residual_px),
                              pixel_area_m2);
  return out;
}

ThresholdSet ThresholdSet::uniform(double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidParameter(fmt::format("box threshold {} outside [0, 1]", t));
  }
  ThresholdSet s;
  s.value.fill(t);
  return s;
}

ThresholdSet parse_thresholds(const nlohmann::json& doc, const std::string& where) {
  if (doc.is_number()) return ThresholdSet::uniform(doc.get<double>());
  if (!doc.is_object()) {
    throw SchemaError(where + ": thresholds must be a number or an object");
  }
  ThresholdSet s = ThresholdSet::uniform(0.25);
  if (auto it = doc.find("default"); it != doc.end()) {
    if (!it->is_number()) throw SchemaError(where + ": 'default' must be a number");
    s = ThresholdSet::uniform(it->get<double>());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "default") continue;
    if (!value.is_number()) {
      throw SchemaError(fmt::format("{}: threshold '{}' must be a number", where, key));
    }
    const double t = value.get<double>();
    if (!(t >= 0.0 && t <= 1.0)) {
      throw ValidationError(
          fmt::format("{}: threshold '{}' = {} outside [0, 1]", where, key, t));
    }
    if (key == "all" || key == "all_buildings") {
      s[BuildingCategory::kOthers] = t;
      continue;
    }
    try {
      s[parse_category(key)] = t;
    } catch (const InvalidParameter&) {
      throw SchemaError(fmt::format("{}: unknown category '{}'", where, key));
    }
  }
  return s;
}

nlohmann::json thresholds_to_json(const ThresholdSet& t) {
  nlohmann::json j = nlohmann::json::object();
  for (BuildingCategory c : kAllCategories) j[std::string(category_key(c))] = t[c];
  return j;
}

TilePixels tile_pixels(const TilePrediction& pred, const TileMeta& tile,
                       const ThresholdSet& thresholds) {
  const auto w = tile.width_px;
  const auto h = tile.height_px;
  TilePixels px;
  const RleMask all =
      stream_mask(pred, {std::nullopt, std::nullopt}, thresholds.all_buildings(), w, h);
  px.all_buildings_px = pixel_count(all);
  std::array<std::int64_t, kNumMeasuredCategories> clipped{};
  for (int i = 0; i < kNumMeasuredCategories; ++i) {
    const auto c = static_cast<BuildingCategory>(i + 1);
    const RleMask m = stream_mask(pred, {c, std::nullopt}, thresholds[c], w, h);
    px.category_px[static_cast<std::size_t>(i)] = pixel_count(m);
    clipped[static_cast<std::size_t>(i)] = overlap_count(m, all);
  }
  px.clipped_category_px = std::accumulate(clipped.begin(), clipped.end(),
                                           std::int64_t{0});
  const std::int64_t residual = px.all_buildings_px - px.clipped_category_px;
  px.overlap_warning = residual < 0;
  px.others_px = std::max<std::int64_t>(0, residual);
  return px;
}

void AreaAccumulator::add(const TilePixels& px, double pixel_area_m2) {
  Bucket& b = buckets_[pixel_area_m2];
  for (int i = 0; i < kNumMeasuredCategories; ++i) {
    b.category_px[static_cast<std::size_t>(i)] += px.category_px[static_cast<std::size_t>(i)];
  }
  b.category_px[category_index(BuildingCategory::kOthers)] += px.others_px;
  b.all_buildings_px += px.all_buildings_px;
  if (px.overlap_warning) ++overlap_warnings_;
  ++tiles_;
}

void AreaAccumulator::merge(const AreaAccumulator& other) {
  for (const auto& [s, ob] : other.buckets_) {
    Bucket& b = buckets_[s];
    for (std::size_t i = 0; i < b.category_px.size(); ++i) b.category_px[i] += ob.category_px[i];
    b.all_buildings_px += ob.all_buildings_px;
  }
  overlap_warnings_ += other.overlap_warnings_;
  tiles_ += other.tiles_;
}

CategoryAreas AreaAccumulator::areas() const {
  CategoryAreas out;
  for (const auto& [s, b] : buckets_) {
    for (std::size_t i = 0; i < b.category_px.size(); ++i) {
      out.area_m2[i] += category_area(b.category_px[i], s);
    }
    out.all_buildings_m2 += category_area(b.all_buildings_px, s);
  }
  return out;
}

std::array<std::int64_t, kNumCategories> AreaAccumulator::category_pixels() const {
  std::array<std::int64_t, kNumCategories> out{};
  for (const auto& [s, b] : buckets_) {
    for (std::size_t i = 0; i < b.category_px.size(); ++i) out[i] += b.category_px[i];
  }
  return out;
}

AreaSummary aggregate_areas(std::span<const TilePrediction> preds,
                            const DatasetManifest& manifest,
                            const ThresholdSet& thresholds, int jobs) {
  std::vector<const TileMeta*> tiles(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    tiles[i] = manifest.find(preds[i].tile_id);
    if (tiles[i] == nullptr) {
      throw MissingInputError(
          fmt::format("predicted tile '{}' is not in the manifest", preds[i].tile_id));
    }
  }
  std::vector<TilePixels> per_tile(preds.size());
  parallel_for(preds.size(), jobs, [&](std::size_t i) {
    per_tile[i] = tile_pixels(preds[i], *tiles[i], thresholds);
  });

  AreaAccumulator acc;
  AreaSummary summary;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    acc.add(per_tile[i], tiles[i]->pixel_area_m2());
    if (per_tile[i].overlap_warning) summary.overlap_tiles.push_back(preds[i].tile_id);
  }
  std::sort(summary.overlap_tiles.begin(), summary.overlap_tiles.end());
  summary.areas = acc.areas();
  summary.overlap_warnings = acc.overlap_warnings();
  summary.tiles = acc.tiles();
  return summary;
}

std::string areas_csv(const AreaSummary& summary) {
  std::string out(kAreasCsvHeader);
  out += '\n';
  for (BuildingCategory c : kAllCategories) {
    out += fmt::format("{},{:.3f}\n", category_key(c), summary.areas[c]);
  }
  out += fmt::format("all_buildings,{:.3f}\n", summary.areas.all_buildings_m2);
  return out;
}

nlohmann::json areas_json(const AreaSummary& summary) {
  nlohmann::json rows = nlohmann::json::array();
  for (BuildingCategory c : kAllCategories) {
    rows.push_back({{"category", category_key(c)}, {"total_rooftop_m2", summary.areas[c]}});
  }
  return {{"categories", std::move(rows)},
          {"all_buildings_m2", summary.areas.all_buildings_m2},
          {"overlap_warnings", summary.overlap_warnings},
          {"tiles", summary.tiles}};
}

}  // namespace bipv
