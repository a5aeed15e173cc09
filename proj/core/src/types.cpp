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

#include "bipv/types.hpp"

#include <cctype>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"
#include "json_util.hpp"

namespace bipv {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "validation";
    case ErrorKind::kSchema: return "schema";
    case ErrorKind::kMissingInput: return "missing-input";
    case ErrorKind::kComputation: return "computation";
  }
  return "unknown";
}

BuildingCategory category_from_code(int code) {
  if (code < 1 || code > kNumCategories) {
    throw InvalidParameter(fmt::format("building category code {} outside 1..6", code));
  }
  return static_cast<BuildingCategory>(code);
}

std::string_view category_name(BuildingCategory c) {
  switch (c) {
    case BuildingCategory::kApartment: return "Apartment";
    case BuildingCategory::kHouse: return "House";
    case BuildingCategory::kCenterBuilding: return "Center building";
    case BuildingCategory::kFactory: return "Factory";
    case BuildingCategory::kHighRiseBuilding: return "High-rise building";
    case BuildingCategory::kOthers: return "Others";
  }
  return "?";
}

std::string_view category_key(BuildingCategory c) {
  switch (c) {
    case BuildingCategory::kApartment: return "apartment";
    case BuildingCategory::kHouse: return "house";
    case BuildingCategory::kCenterBuilding: return "center_building";
    case BuildingCategory::kFactory: return "factory";
    case BuildingCategory::kHighRiseBuilding: return "high_rise_building";
    case BuildingCategory::kOthers: return "others";
  }
  return "?";
}

namespace {

std::string normalize(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (ch == ' ' || ch == '-' || ch == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

}  // namespace

BuildingCategory parse_category(std::string_view text) {
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.front()))) {
    int code = 0;
    for (char ch : text) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) {
        throw InvalidParameter(fmt::format("unknown building category '{}'", text));
      }
      code = code * 10 + (ch - '0');
      if (code > 100) break;
    }
    return category_from_code(code);
  }
  const std::string wanted = normalize(text);
  for (BuildingCategory c : kAllCategories) {
    if (normalize(category_name(c)) == wanted || normalize(category_key(c)) == wanted) {
      return c;
    }
  }
  // Common aliases seen in label exports.
  if (wanted == "other") return BuildingCategory::kOthers;
  if (wanted == "centerbuildings" || wanted == "center") {
    return BuildingCategory::kCenterBuilding;
  }
  if (wanted == "highrise") return BuildingCategory::kHighRiseBuilding;
  throw InvalidParameter(fmt::format("unknown building category '{}'", text));
}

double pixel_area(double scale_denominator, double ppi) {
  if (!(scale_denominator > 0.0) || !(ppi > 0.0)) {
    throw InvalidParameter(fmt::format(
        "pixel_area requires positive scale and ppi (got scale={}, ppi={})",
        scale_denominator, ppi));
  }
  const double meters_per_px = scale_denominator * kMetersPerInch / ppi;
  return meters_per_px * meters_per_px;
}

std::vector<std::string> tile_violations(const TileMeta& tile) {
  std::vector<std::string> out;
  const std::string& id = tile.tile_id;
  if (id.empty()) out.emplace_back("tile with empty tile_id");
  if (tile.width_px < 1 || tile.height_px < 1) {
    out.push_back(fmt::format("tile '{}': dimensions {}x{} must be positive", id,
                              tile.width_px, tile.height_px));
  }
  if (!(tile.ppi > 0.0)) {
    out.push_back(fmt::format("tile '{}': ppi {} must be positive", id, tile.ppi));
  }
  if (!(tile.scale_denominator > 0.0)) {
    out.push_back(fmt::format("tile '{}': scale_denominator {} must be positive", id,
                              tile.scale_denominator));
  }
  if (tile.declared_area_m2) {
    const double declared = *tile.declared_area_m2;
    if (!(declared > 0.0)) {
      out.push_back(fmt::format("tile '{}': declared_area_m2 {} must be positive", id,
                                declared));
    } else if (out.empty()) {
      const double geometric = tile.geometric_area_m2();
      const double rel = std::abs(geometric - declared) / declared;
      if (rel > kDeclaredAreaTolerance) {
        out.push_back(fmt::format(
            "tile '{}': pixel-derived area {:.1f} m2 differs from declared {:.1f} m2 "
            "by {:.2f}% (tolerance {:.0f}%)",
            id, geometric, declared, rel * 100.0, kDeclaredAreaTolerance * 100.0));
      }
    }
  }
  return out;
}

void validate_tile(const TileMeta& tile) {
  auto problems = tile_violations(tile);
  if (!problems.empty()) throw ValidationError(problems.front());
}

const TileMeta* DatasetManifest::find(std::string_view tile_id) const {
  for (const auto& t : tiles) {
    if (t.tile_id == tile_id) return &t;
  }
  return nullptr;
}

ManifestLoadResult parse_manifest(const nlohmann::json& doc,
                                  const ManifestLoadOptions& options) {
  using detail::require;
  ManifestLoadResult result;
  if (!doc.is_object()) throw SchemaError("manifest: expected a JSON object");
  detail::report_unknown_keys(doc, {"name", "labeled", "tiles"}, "manifest",
                              options.strict, result.warnings);

  DatasetManifest& m = result.manifest;
  m.name = detail::require_string(doc, "name", "manifest");
  m.labeled = detail::require_bool(doc, "labeled", "manifest");
  const auto& tiles = require(doc, "tiles", "manifest");
  if (!tiles.is_array()) throw SchemaError("manifest: 'tiles' must be an array");
  if (tiles.empty()) throw ValidationError("manifest: tiles list is empty");

  std::set<std::string> seen;
  m.tiles.reserve(tiles.size());
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto& jt = tiles[i];
    const std::string where = fmt::format("manifest.tiles[{}]", i);
    if (!jt.is_object()) throw SchemaError(where + ": expected an object");
    if (!jt.contains("tile_id")) throw SchemaError(where + ": missing key 'tile_id'");
    TileMeta t;
    t.tile_id = detail::require_string(jt, "tile_id", where);
    const std::string tile_where = fmt::format("tile '{}'", t.tile_id);
    detail::report_unknown_keys(jt,
                                {"tile_id", "width_px", "height_px", "ppi",
                                 "scale_denominator", "lens_height_m",
                                 "declared_area_m2"},
                                tile_where, options.strict, result.warnings);
    t.width_px = detail::require_integer(jt, "width_px", tile_where);
    t.height_px = detail::require_integer(jt, "height_px", tile_where);
    t.ppi = detail::require_number(jt, "ppi", tile_where);
    t.scale_denominator = detail::require_number(jt, "scale_denominator", tile_where);
    t.lens_height_m = detail::optional_number(jt, "lens_height_m", tile_where);
    t.declared_area_m2 = detail::optional_number(jt, "declared_area_m2", tile_where);

    if (!seen.insert(t.tile_id).second) {
      throw SchemaError(fmt::format("manifest: duplicate tile_id '{}'", t.tile_id));
    }
    TileMeta check = t;
    if (!options.check_declared_area) check.declared_area_m2.reset();
    validate_tile(check);
    m.tiles.push_back(std::move(t));
  }
  return result;
}

ManifestLoadResult load_manifest(const std::filesystem::path& path,
                                 const ManifestLoadOptions& options) {
  return parse_manifest(detail::read_json_file(path), options);
}

nlohmann::json manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json tiles = nlohmann::json::array();
  for (const auto& t : manifest.tiles) {
    nlohmann::json jt = {{"tile_id", t.tile_id},
                         {"width_px", t.width_px},
                         {"height_px", t.height_px},
                         {"ppi", t.ppi},
                         {"scale_denominator", t.scale_denominator}};
    if (t.lens_height_m) jt["lens_height_m"] = *t.lens_height_m;
    if (t.declared_area_m2) jt["declared_area_m2"] = *t.declared_area_m2;
    tiles.push_back(std::move(jt));
  }
  return {{"name", manifest.name}, {"labeled", manifest.labeled}, {"tiles", tiles}};
}

double dataset_area(std::span<const TileMeta> tiles) {
  double total = 0.0;
  for (const auto& t : tiles) total += t.area_m2();
  return total;
}

double dataset_area(const DatasetManifest& manifest) {
  return dataset_area(std::span<const TileMeta>(manifest.tiles));
}

}  // namespace bipv
