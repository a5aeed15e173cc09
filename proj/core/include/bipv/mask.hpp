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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bipv/types.hpp"

namespace bipv {

// Binary pixel mask stored as row-major alternating run lengths. The first
// run counts background pixels and may be zero; every later run is positive,
// so two masks are equal iff their run vectors are equal.
class RleMask {
 public:
  using Run = std::uint32_t;

  RleMask() = default;

  // Validates the run invariants; throws ValidationError ("corrupt mask").
  RleMask(std::int64_t width_px, std::int64_t height_px, std::vector<Run> runs);

  static RleMask empty(std::int64_t width_px, std::int64_t height_px);
  static RleMask full(std::int64_t width_px, std::int64_t height_px);

  std::int64_t width() const { return width_; }
  std::int64_t height() const { return height_; }
  std::int64_t pixel_total() const { return width_ * height_; }
  const std::vector<Run>& runs() const { return runs_; }

  bool same_shape(const RleMask& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const RleMask&) const = default;

 private:
  std::int64_t width_ = 0;
  std::int64_t height_ = 0;
  std::vector<Run> runs_;
};

// Row-major dense bitmap; `bits.size()` must equal width * height.
struct Bitmap {
  std::int64_t width = 0;
  std::int64_t height = 0;
  std::vector<std::uint8_t> bits;

  bool at(std::int64_t row, std::int64_t col) const {
    return bits[static_cast<std::size_t>(row * width + col)] != 0;
  }
  bool operator==(const Bitmap&) const = default;
};

RleMask rle_encode(const Bitmap& bitmap);
Bitmap rle_decode(const RleMask& mask);

// Number of foreground pixels (sum of odd-indexed runs).
std::int64_t pixel_count(const RleMask& mask);

RleMask mask_union(const RleMask& a, const RleMask& b);
RleMask mask_intersection(const RleMask& a, const RleMask& b);
// Pixels of `a` not in `b`.
RleMask mask_difference(const RleMask& a, const RleMask& b);
RleMask mask_complement(const RleMask& a);

// Union of all masks; throws ValidationError naming the index of the first
// mask whose dimensions differ from masks[0]. An empty list is rejected.
RleMask union_mask(std::span<const RleMask> masks);

// |a & b| without materialising the intersection.
std::int64_t overlap_count(const RleMask& a, const RleMask& b);

// ---------------------------------------------------------------------------
// Segmenter output.

struct InstanceMask {
  // Empty for the all-buildings stream produced by the generic prompt.
  std::optional<BuildingCategory> category;
  double score = 0.0;
  RleMask mask;
  std::optional<std::string> prompt_id;

  bool is_all_buildings() const { return !category.has_value(); }
  bool operator==(const InstanceMask&) const = default;
};

struct TilePrediction {
  std::string tile_id;
  std::vector<InstanceMask> instances;

  bool operator==(const TilePrediction&) const = default;
};

// Keeps instances with score >= box_threshold, preserving order. Throws
// InvalidParameter for thresholds outside [0, 1].
TilePrediction filter_by_threshold(const TilePrediction& pred, double box_threshold);

// Selects which instances make up a class mask.
struct StreamSelector {
  std::optional<BuildingCategory> category;  // empty = all-buildings stream
  std::optional<std::string> prompt_id;      // empty = any prompt

  bool matches(const InstanceMask& inst) const;
};

// Union of the selected instances with score >= threshold, or an empty mask
// of the given shape when nothing is selected.
RleMask stream_mask(const TilePrediction& pred, const StreamSelector& selector,
                    double box_threshold, std::int64_t width_px,
                    std::int64_t height_px);

// Dimension / score problems relative to a tile, one message each.
std::vector<std::string> prediction_violations(const TilePrediction& pred,
                                               const TileMeta& tile);

// ---------------------------------------------------------------------------
// Ground truth.

inline constexpr int kNumLabelCodes = 7;  // 0 = background, 1..6 categories

class GroundTruthMap {
 public:
  GroundTruthMap() = default;

  // Masks must share dimensions and partition the grid; throws ValidationError.
  GroundTruthMap(std::string tile_id, std::array<RleMask, kNumLabelCodes> labels);

  // Builds from a per-pixel label grid with codes 0..6.
  static GroundTruthMap from_labels(std::string tile_id, std::int64_t width_px,
                                    std::int64_t height_px,
                                    std::span<const std::uint8_t> labels);

  const std::string& tile_id() const { return tile_id_; }
  std::int64_t width() const { return labels_[0].width(); }
  std::int64_t height() const { return labels_[0].height(); }
  const RleMask& label(int code) const;
  const RleMask& category_mask(BuildingCategory c) const {
    return label(category_code(c));
  }
  // Every non-background pixel.
  RleMask all_buildings() const;

  bool operator==(const GroundTruthMap&) const = default;

 private:
  std::string tile_id_;
  std::array<RleMask, kNumLabelCodes> labels_;
};

// ---------------------------------------------------------------------------
// Interchange files.

nlohmann::json rle_to_json(const RleMask& mask);
RleMask rle_from_json(const nlohmann::json& doc, const std::string& where);

nlohmann::json prediction_to_json(const TilePrediction& pred);
TilePrediction parse_prediction(const nlohmann::json& doc, const std::string& where);
TilePrediction load_prediction(const std::filesystem::path& path);

nlohmann::json ground_truth_to_json(const GroundTruthMap& gt);
GroundTruthMap parse_ground_truth(const nlohmann::json& doc, const std::string& where);
GroundTruthMap load_ground_truth(const std::filesystem::path& path);

// Loads every *.json in `dir`, sorted by tile_id. Throws SchemaError for
// duplicate tile ids.
std::vector<TilePrediction> load_prediction_dir(const std::filesystem::path& dir);
std::vector<GroundTruthMap> load_ground_truth_dir(const std::filesystem::path& dir);

}  // namespace bipv
