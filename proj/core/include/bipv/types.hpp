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
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace bipv {

// Building taxonomy. Codes are stable and used on the wire; Others is the
// residual class obtained by subtracting the five measured classes from the
// all-buildings mask.
enum class BuildingCategory : int {
  kApartment = 1,
  kHouse = 2,
  kCenterBuilding = 3,
  kFactory = 4,
  kHighRiseBuilding = 5,
  kOthers = 6,
};

inline constexpr int kNumCategories = 6;
inline constexpr int kNumMeasuredCategories = 5;

inline constexpr std::array<BuildingCategory, kNumCategories> kAllCategories = {
    BuildingCategory::kApartment,      BuildingCategory::kHouse,
    BuildingCategory::kCenterBuilding, BuildingCategory::kFactory,
    BuildingCategory::kHighRiseBuilding, BuildingCategory::kOthers,
};

constexpr int category_code(BuildingCategory c) { return static_cast<int>(c); }
constexpr std::size_t category_index(BuildingCategory c) {
  return static_cast<std::size_t>(static_cast<int>(c) - 1);
}

// Throws InvalidParameter for codes outside 1..6.
BuildingCategory category_from_code(int code);

// Display name ("Apartment", "Center building", ...) used in prompts and
// report tables.
std::string_view category_name(BuildingCategory c);

// Machine key ("apartment", "center_building", ...) used in config files.
std::string_view category_key(BuildingCategory c);

// Accepts the display name, the machine key or the numeric code.
BuildingCategory parse_category(std::string_view text);

inline constexpr double kMetersPerInch = 0.0254;
inline constexpr double kDeclaredAreaTolerance = 0.02;

// Square meters covered by one pixel: (scale_denominator * 0.0254 / ppi)^2.
double pixel_area(double scale_denominator, double ppi);

struct TileMeta {
  std::string tile_id;
  std::int64_t width_px = 0;
  std::int64_t height_px = 0;
  double ppi = 0.0;
  double scale_denominator = 0.0;
  std::optional<double> lens_height_m;
  std::optional<double> declared_area_m2;

  std::int64_t pixel_total() const { return width_px * height_px; }
  double pixel_area_m2() const { return pixel_area(scale_denominator, ppi); }
  double geometric_area_m2() const {
    return static_cast<double>(pixel_total()) * pixel_area_m2();
  }
  // Declared area when present, else the pixel-derived area.
  double area_m2() const { return declared_area_m2.value_or(geometric_area_m2()); }

  bool operator==(const TileMeta&) const = default;
};

// Problems with a single tile, one message per violated invariant. The
// declared-area cross-check is included.
std::vector<std::string> tile_violations(const TileMeta& tile);

// Throws ValidationError naming the tile on the first violation.
void validate_tile(const TileMeta& tile);

struct DatasetManifest {
  std::string name;
  bool labeled = false;
  std::vector<TileMeta> tiles;

  // Linear scan; manifests are small enough that an index is not worth it.
  const TileMeta* find(std::string_view tile_id) const;

  bool operator==(const DatasetManifest&) const = default;
};

struct ManifestLoadOptions {
  // Reject unknown keys instead of collecting them as warnings.
  bool strict = false;
  // Skip the declared-area cross-check (validate reports it separately).
  bool check_declared_area = true;
};

struct ManifestLoadResult {
  DatasetManifest manifest;
  std::vector<std::string> warnings;
};

ManifestLoadResult parse_manifest(const nlohmann::json& doc,
                                  const ManifestLoadOptions& options = {});
ManifestLoadResult load_manifest(const std::filesystem::path& path,
                                 const ManifestLoadOptions& options = {});

nlohmann::json manifest_to_json(const DatasetManifest& manifest);

// Sum of per-tile areas; declared areas take precedence over geometry.
double dataset_area(const DatasetManifest& manifest);
double dataset_area(std::span<const TileMeta> tiles);

}  // namespace bipv
