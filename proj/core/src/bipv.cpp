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

#include "bipv/bipv.hpp"

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"
#include "json_util.hpp"

namespace bipv {

std::string_view bipv_key(BipvType t) {
  switch (t) {
    case BipvType::kRooftop: return "rooftop";
    case BipvType::kFacade: return "facade";
    case BipvType::kWindow: return "window";
  }
  return "?";
}

std::string_view bipv_name(BipvType t) {
  switch (t) {
    case BipvType::kRooftop: return "Rooftop PV";
    case BipvType::kFacade: return "Facade-integrated PV";
    case BipvType::kWindow: return "PV windows";
  }
  return "?";
}

BipvType parse_bipv_type(std::string_view text) {
  for (BipvType t : kAllBipvTypes) {
    if (text == bipv_key(t) || text == bipv_name(t)) return t;
  }
  if (text == "roof") return BipvType::kRooftop;
  if (text == "facade_integrated") return BipvType::kFacade;
  if (text == "windows") return BipvType::kWindow;
  throw InvalidParameter(fmt::format("unknown BIPV type '{}'", text));
}

std::array<Cell, kNumCells> all_cells() {
  std::array<Cell, kNumCells> out{};
  std::size_t i = 0;
  for (BuildingCategory c : kAllCategories) {
    for (BipvType t : kAllBipvTypes) out[i++] = {c, t};
  }
  return out;
}

std::string cell_label(const Cell& cell) {
  return fmt::format("{}/{}", category_key(cell.category), bipv_key(cell.type));
}

BipvFactors BipvFactors::defaults() {
  // Rooftop, facade, window (A/RA, K_mapping) per category.
  static constexpr double kTable[kNumCategories][kNumBipvTypes][2] = {
      {{1.0, 0.60}, {5.5, 0.35}, {0.18, 0.10}},   // Apartment
      {{1.0, 0.70}, {1.4, 0.30}, {0.12, 0.18}},   // House
      {{1.0, 0.65}, {1.8, 0.35}, {0.25, 0.12}},   // Center building
      {{1.0, 0.80}, {1.3, 0.40}, {0.08, 0.06}},   // Factory
      {{1.0, 0.50}, {12.1, 0.24}, {0.35, 0.18}},  // High-rise building
      {{1.0, 0.40}, {1.1, 0.15}, {0.20, 0.03}},   // Others
  };
  BipvFactors f;
  for (const Cell& cell : all_cells()) {
    const auto& row = kTable[category_index(cell.category)][bipv_index(cell.type)];
    f.set(cell, {row[0], row[1]});
  }
  return f;
}

void BipvFactors::set(const Cell& cell, ConversionFactor f) { cells_[cell.index()] = f; }

const ConversionFactor& BipvFactors::at(const Cell& cell) const {
  const auto& slot = cells_[cell.index()];
  if (!slot) {
    throw ValidationError(
        fmt::format("conversion factor missing for {}", cell_label(cell)));
  }
  return *slot;
}

std::vector<std::string> BipvFactors::violations() const {
  std::vector<std::string> out;
  for (const Cell& cell : all_cells()) {
    const auto& slot = cells_[cell.index()];
    if (!slot) {
      out.push_back(fmt::format("conversion factor missing for {}", cell_label(cell)));
      continue;
    }
    if (!(slot->a_over_ra > 0.0)) {
      out.push_back(fmt::format("{}: a_over_ra {} must be positive", cell_label(cell),
                                slot->a_over_ra));
    }
    if (!(slot->k_mapping > 0.0 && slot->k_mapping <= 1.0)) {
      out.push_back(fmt::format("{}: k_mapping {} outside (0, 1]", cell_label(cell),
                                slot->k_mapping));
    }
  }
  return out;
}

BipvFactors parse_factors(const nlohmann::json& doc, BipvFactors base,
                          const std::string& where) {
  if (doc.is_null()) return base;
  if (!doc.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [ckey, row] : doc.items()) {
    BuildingCategory category;
    try {
      category = parse_category(ckey);
    } catch (const InvalidParameter&) {
      throw SchemaError(fmt::format("{}: unknown category '{}'", where, ckey));
    }
    if (!row.is_object()) {
      throw SchemaError(fmt::format("{}.{}: expected an object", where, ckey));
    }
    for (const auto& [tkey, cellj] : row.items()) {
      BipvType type;
      try {
        type = parse_bipv_type(tkey);
      } catch (const InvalidParameter&) {
        throw SchemaError(fmt::format("{}.{}: unknown BIPV type '{}'", where, ckey, tkey));
      }
      const Cell cell{category, type};
      if (cellj.is_null()) {
        base.clear(cell);
        continue;
      }
      const std::string cw = fmt::format("{}.{}.{}", where, ckey, tkey);
      ConversionFactor f = base.has(cell) ? base.at(cell) : ConversionFactor{};
      if (auto v = detail::optional_number(cellj, "a_over_ra", cw)) f.a_over_ra = *v;
      if (auto v = detail::optional_number(cellj, "k_mapping", cw)) f.k_mapping = *v;
      base.set(cell, f);
    }
  }
  return base;
}

nlohmann::json factors_to_json(const BipvFactors& f) {
  nlohmann::json j = nlohmann::json::object();
  for (const Cell& cell : all_cells()) {
    if (!f.has(cell)) continue;
    const auto& v = f.at(cell);
    j[std::string(category_key(cell.category))][std::string(bipv_key(cell.type))] = {
        {"a_over_ra", v.a_over_ra}, {"k_mapping", v.k_mapping}};
  }
  return j;
}

std::vector<std::string> panel_violations(const PanelSpec& p) {
  std::vector<std::string> out;
  if (!(p.length_m > 0.0) || !(p.width_m > 0.0)) {
    out.push_back(fmt::format("panel dimensions {}x{} m must be positive", p.length_m,
                              p.width_m));
  }
  if (!(p.rated_power_w > 0.0)) {
    out.push_back(fmt::format("panel rated_power_w {} must be positive", p.rated_power_w));
  }
  return out;
}

std::vector<std::string> panel_warnings(const PanelSpec& p) {
  std::vector<std::string> out;
  const double mpp = p.mpp_power_w();
  if (mpp > 0.0 && std::abs(p.p_max_w - mpp) > 0.05 * mpp) {
    out.push_back(fmt::format(
        "panel p_max_w {} W disagrees with v_mp * i_mp = {:.2f} W; capacity uses "
        "rated_power_w = {} W",
        p.p_max_w, mpp, p.rated_power_w));
  }
  return out;
}

PanelSpec parse_panel(const nlohmann::json& doc, PanelSpec base, const std::string& where) {
  if (doc.is_null()) return base;
  if (!doc.is_object()) throw SchemaError(where + ": expected an object");
  const bool rated_given = doc.contains("rated_power_w");
  auto take = [&](const char* key, double& field) {
    if (auto v = detail::optional_number(doc, key, where)) field = *v;
  };
  take("length_m", base.length_m);
  take("width_m", base.width_m);
  take("depth_m", base.depth_m);
  take("weight_kg", base.weight_kg);
  take("installation_area_m2", base.installation_area_m2);
  take("p_max_w", base.p_max_w);
  take("v_mp_v", base.v_mp_v);
  take("i_mp_a", base.i_mp_a);
  take("t_min_c", base.t_min_c);
  take("t_max_c", base.t_max_c);
  if (rated_given) {
    take("rated_power_w", base.rated_power_w);
  } else if (doc.contains("v_mp_v") || doc.contains("i_mp_a")) {
    base.rated_power_w = base.mpp_power_w();
  }
  for (auto& msg : detail::unknown_keys(
           doc,
           {"length_m", "width_m", "depth_m", "weight_kg", "installation_area_m2",
            "p_max_w", "v_mp_v", "i_mp_a", "t_min_c", "t_max_c", "rated_power_w"},
           where)) {
    throw SchemaError(msg);
  }
  return base;
}

nlohmann::json panel_to_json(const PanelSpec& p) {
  return {{"length_m", p.length_m},
          {"width_m", p.width_m},
          {"depth_m", p.depth_m},
          {"weight_kg", p.weight_kg},
          {"installation_area_m2", p.installation_area_m2},
          {"p_max_w", p.p_max_w},
          {"v_mp_v", p.v_mp_v},
          {"i_mp_a", p.i_mp_a},
          {"t_min_c", p.t_min_c},
          {"t_max_c", p.t_max_c},
          {"rated_power_w", p.rated_power_w}};
}

CellTable<double> aapv(const CategoryAreas& areas, const BipvFactors& factors) {
  CellTable<double> out{};
  for (const Cell& cell : all_cells()) {
    const ConversionFactor& f = factors.at(cell);
    out[cell.index()] = areas[cell.category] * f.a_over_ra * f.k_mapping;
  }
  return out;
}

std::int64_t panel_count(double aapv_m2, const PanelSpec& panel) {
  if (!(aapv_m2 >= 0.0)) {
    throw InvalidParameter(fmt::format("AAPV {} m2 must be non-negative", aapv_m2));
  }
  const double footprint = panel.footprint_m2();
  if (!(footprint > 0.0)) throw InvalidParameter("panel footprint must be positive");
  return static_cast<std::int64_t>(std::floor(aapv_m2 / footprint));
}

double capacity(std::int64_t count, const PanelSpec& panel) {
  if (count < 0) throw InvalidParameter(fmt::format("negative panel count {}", count));
  return static_cast<double>(count) * panel.rated_power_w;
}

std::int64_t InstallPlan::total_panels() const {
  std::int64_t n = 0;
  for (const auto& c : cells) n += c.panel_count;
  return n;
}

double InstallPlan::total_capacity_w() const {
  double w = 0.0;
  for (const auto& c : cells) w += c.capacity_w;
  return w;
}

InstallPlan build_install_plan(const CategoryAreas& areas, const BipvFactors& factors,
                               const PanelSpec& panel) {
  const CellTable<double> usable = aapv(areas, factors);
  InstallPlan plan;
  for (const Cell& cell : all_cells()) {
    InstallCell& ic = plan.cells[cell.index()];
    ic.aapv_m2 = usable[cell.index()];
    ic.panel_count = panel_count(ic.aapv_m2, panel);
    ic.capacity_w = capacity(ic.panel_count, panel);
  }
  return plan;
}

std::string panels_csv(const InstallPlan& plan) {
  std::string out(kPanelsCsvHeader);
  out += '\n';
  for (const Cell& cell : all_cells()) {
    const InstallCell& ic = plan[cell];
    out += fmt::format("{},{},{:.3f},{},{:.3f}\n", category_key(cell.category),
                       bipv_key(cell.type), ic.aapv_m2, ic.panel_count, ic.capacity_w);
  }
  return out;
}

}  // namespace bipv
