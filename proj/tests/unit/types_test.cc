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

#include <cmath>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"

namespace bipv {
namespace {

using nlohmann::json;

TEST(PixelAreaTest, HandEvaluatedValues) {
  // (1110 * 0.0254 / 196)^2 and (1000 * 0.0254 / 100)^2.
  const double side = 1110.0 * 0.0254 / 196.0;
  EXPECT_DOUBLE_EQ(pixel_area(1110, 196), side * side);
  EXPECT_NEAR(pixel_area(1110, 196), 0.0206919, 5e-8);
  EXPECT_NEAR(pixel_area(1000, 100), 0.064516, 1e-12);
}

TEST(PixelAreaTest, QuadraticInScaleAndMonotone) {
  EXPECT_DOUBLE_EQ(pixel_area(2220, 196), 4.0 * pixel_area(1110, 196));
  double prev = 0.0;
  for (double scale = 100; scale <= 5000; scale += 100) {
    const double s = pixel_area(scale, 196);
    EXPECT_GT(s, prev);
    prev = s;
  }
  prev = pixel_area(1110, 10);
  for (double ppi = 20; ppi <= 600; ppi += 10) {
    const double s = pixel_area(1110, ppi);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(PixelAreaTest, RejectsNonPositiveInputs) {
  EXPECT_THROW(pixel_area(0, 196), InvalidParameter);
  EXPECT_THROW(pixel_area(1110, -1), InvalidParameter);
}

TEST(TileMetaTest, ReferenceTileMatchesDeclaredAreaWithinOnePercent) {
  TileMeta t{"z", 1389, 1389, 196, 1110, std::nullopt, 39920.0};
  EXPECT_LT(std::abs(t.geometric_area_m2() - 39920.0) / 39920.0, 0.01);
  EXPECT_TRUE(tile_violations(t).empty());
  EXPECT_DOUBLE_EQ(t.area_m2(), 39920.0);
}

TEST(TileMetaTest, DeclaredAreaOffByFivePercentIsAViolation) {
  TileMeta t{"z", 100, 100, 100, 1000, std::nullopt, std::nullopt};
  t.declared_area_m2 = t.geometric_area_m2() * 1.05;
  const auto v = tile_violations(t);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("declared"), std::string::npos);
  EXPECT_THROW(validate_tile(t), ValidationError);

  t.declared_area_m2 = t.geometric_area_m2() * 1.015;
  EXPECT_TRUE(tile_violations(t).empty());
}

TEST(TileMetaTest, InvalidGeometry) {
  TileMeta t{"bad", 0, 10, 0, -5, std::nullopt, std::nullopt};
  EXPECT_EQ(tile_violations(t).size(), 3u);
}

json two_tile_manifest() {
  return {{"name", "m"},
          {"labeled", false},
          {"tiles",
           {{{"tile_id", "a"}, {"width_px", 10}, {"height_px", 10}, {"ppi", 100},
             {"scale_denominator", 1000}},
            {{"tile_id", "b"}, {"width_px", 20}, {"height_px", 10}, {"ppi", 100},
             {"scale_denominator", 1000}, {"declared_area_m2", 12.9032}}}}};
}

TEST(ManifestTest, LoadsTwoTiles) {
  const auto r = parse_manifest(two_tile_manifest());
  ASSERT_EQ(r.manifest.tiles.size(), 2u);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.manifest.tiles[1].tile_id, "b");
  ASSERT_NE(r.manifest.find("b"), nullptr);
  EXPECT_EQ(r.manifest.find("c"), nullptr);
}

TEST(ManifestTest, DuplicateTileIdIsSchemaErrorNamingTheId) {
  json doc = two_tile_manifest();
  doc["tiles"][1]["tile_id"] = "a";
  try {
    parse_manifest(doc);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
}

TEST(ManifestTest, EmptyTilesIsValidationError) {
  json doc = two_tile_manifest();
  doc["tiles"] = json::array();
  EXPECT_THROW(parse_manifest(doc), ValidationError);
}

TEST(ManifestTest, UnknownKeysWarnOrThrowInStrictMode) {
  json doc = two_tile_manifest();
  doc["tiles"][0]["colour"] = "red";
  EXPECT_EQ(parse_manifest(doc).warnings.size(), 1u);
  EXPECT_THROW(parse_manifest(doc, {.strict = true}), SchemaError);
}

TEST(ManifestTest, JsonRoundTrip) {
  const auto m = parse_manifest(two_tile_manifest()).manifest;
  EXPECT_EQ(parse_manifest(manifest_to_json(m)).manifest, m);
}

TEST(DatasetAreaTest, DeclaredAreasTakePrecedence) {
  TileMeta t{"z", 1389, 1389, 196, 1110, std::nullopt, 39920.0};
  std::vector<TileMeta> one{t};
  EXPECT_DOUBLE_EQ(dataset_area(one), 39920.0);
  EXPECT_DOUBLE_EQ(dataset_area(std::span<const TileMeta>{}), 0.0);
}

TEST(DatasetAreaTest, FullDatasetProduct) {
  TileMeta t{"z", 1389, 1389, 196, 1110, std::nullopt, 39920.0};
  std::vector<TileMeta> tiles(149420, t);
  EXPECT_NEAR(dataset_area(tiles), 5.96485e9, 1e4);
}

TEST(DatasetAreaTest, AdditiveUnderPartition) {
  std::vector<TileMeta> tiles;
  for (int i = 0; i < 37; ++i) {
    tiles.push_back({std::to_string(i), 50 + i, 40 + 2 * i, 96.0 + i, 900.0 + 13 * i,
                     std::nullopt, std::nullopt});
  }
  const std::span<const TileMeta> all(tiles);
  EXPECT_DOUBLE_EQ(dataset_area(all), dataset_area(all.subspan(0, 37)));
  const double parts = dataset_area(all.subspan(0, 16)) + dataset_area(all.subspan(16));
  EXPECT_NEAR(dataset_area(all), parts, 1e-9 * parts);
}

TEST(CategoryTest, CodesNamesAndParsing) {
  for (BuildingCategory c : kAllCategories) {
    EXPECT_EQ(category_from_code(category_code(c)), c);
    EXPECT_EQ(parse_category(category_name(c)), c);
    EXPECT_EQ(parse_category(category_key(c)), c);
    EXPECT_EQ(parse_category(std::to_string(category_code(c))), c);
  }
  EXPECT_EQ(parse_category("High-rise building"), BuildingCategory::kHighRiseBuilding);
  EXPECT_THROW(parse_category("castle"), InvalidParameter);
  EXPECT_THROW(category_from_code(7), InvalidParameter);
}

}  // namespace
}  // namespace bipv
