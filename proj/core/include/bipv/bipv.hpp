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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bipv/area.hpp"
#include "bipv/types.hpp"

namespace bipv {

enum class BipvType : int { kRooftop = 0, kFacade = 1, kWindow = 2 };

inline constexpr int kNumBipvTypes = 3;
inline constexpr std::array<BipvType, kNumBipvTypes> kAllBipvTypes = {
    BipvType::kRooftop, BipvType::kFacade, BipvType::kWindow};

constexpr std::size_t bipv_index(BipvType t) { return static_cast<std::size_t>(t); }

// "rooftop", "facade", "window".
std::string_view bipv_key(BipvType t);
std::string_view bipv_name(BipvType t);
BipvType parse_bipv_type(std::string_view text);

// One (category, BIPV type) pair; 18 in total.
struct Cell {
  BuildingCategory category = BuildingCategory::kApartment;
  BipvType type = BipvType::kRooftop;

  std::size_t index() const {
    return category_index(category) * kNumBipvTypes + bipv_index(type);
  }
  auto operator<=>(const Cell&) const = default;
};

inline constexpr int kNumCells = kNumCategories * kNumBipvTypes;

// All cells ordered by category code, then BIPV type.
std::array<Cell, kNumCells> all_cells();
std::string cell_label(const Cell& cell);

// Dense per-cell storage.
template <typename T>
using CellTable = std::array<T, kNumCells>;

struct ConversionFactor {
  double a_over_ra = 0.0;  // surface area relative to rooftop area
  double k_mapping = 0.0;  // usable fraction in (0, 1]
  bool operator==(const ConversionFactor&) const = default;
};

class BipvFactors {
 public:
  // Every cell unset.
  BipvFactors() = default;

  // Reference conversion factors for the six categories.
  static BipvFactors defaults();

  void set(const Cell& cell, ConversionFactor f);
  void clear(const Cell& cell) { cells_[cell.index()].reset(); }
  bool has(const Cell& cell) const { return cells_[cell.index()].has_value(); }

  // Throws ValidationError (configuration error) for a missing cell.
  const ConversionFactor& at(const Cell& cell) const;

  // Missing or out-of-range cells, one message each.
  std::vector<std::string> violations() const;

  bool operator==(const BipvFactors&) const = default;

 private:
  CellTable<std::optional<ConversionFactor>> cells_{};
};

// Overlays {category: {bipv_type: {a_over_ra, k_mapping}}} onto `base`.
BipvFactors parse_factors(const nlohmann::json& doc, BipvFactors base,
                          const std::string& where);
nlohmann::json factors_to_json(const BipvFactors& f);

struct PanelSpec {
  double length_m = 2.094;
  double width_m = 1.038;
  double depth_m = 0.035;
  double weight_kg = 27.5;
  double installation_area_m2 = 2.23;
  double p_max_w = 46.3;
  double v_mp_v = 41.0;
  double i_mp_a = 11.45;
  double t_min_c = -40.0;
  double t_max_c = 85.0;
  // Nameplate power used for capacity and yield. Defaults to V_mp * I_mp.
  double rated_power_w = 41.0 * 11.45;

  double footprint_m2() const { return length_m * width_m; }
  double mpp_power_w() const { return v_mp_v * i_mp_a; }

  bool operator==(const PanelSpec&) const = default;
};

// Hard violations (non-positive dimensions or power).
std::vector<std::string> panel_violations(const PanelSpec& panel);
// Soft problems: listed P_max disagreeing with V_mp * I_mp by more than 5%.
std::vector<std::string> panel_warnings(const PanelSpec& panel);

PanelSpec parse_panel(const nlohmann::json& doc, PanelSpec base, const std::string& where);
nlohmann::json panel_to_json(const PanelSpec& panel);

// AAPV = A_i * (A/RA) * K_mapping for every cell.
CellTable<double> aapv(const CategoryAreas& areas, const BipvFactors& factors);

// floor(aapv / footprint).
std::int64_t panel_count(double aapv_m2, const PanelSpec& panel);

// count * rated power, in watts.
double capacity(std::int64_t count, const PanelSpec& panel);

struct InstallCell {
  double aapv_m2 = 0.0;
  std::int64_t panel_count = 0;
  double capacity_w = 0.0;
  bool operator==(const InstallCell&) const = default;
};

struct InstallPlan {
  CellTable<InstallCell> cells{};

  const InstallCell& operator[](const Cell& c) const { return cells[c.index()]; }
  std::int64_t total_panels() const;
  double total_capacity_w() const;
  bool operator==(const InstallPlan&) const = default;
};

InstallPlan build_install_plan(const CategoryAreas& areas, const BipvFactors& factors,
                               const PanelSpec& panel);

inline constexpr std::string_view kPanelsCsvHeader =
    "category,bipv_type,aapv_m2,panel_count,capacity_w";

std::string panels_csv(const InstallPlan& plan);

}  // namespace bipv
