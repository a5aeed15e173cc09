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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bipv/area.hpp"
#include "bipv/bipv.hpp"
#include "bipv/econ.hpp"

namespace bipv {

struct AreaRow {
  BuildingCategory category = BuildingCategory::kApartment;
  double total_rooftop_m2 = 0.0;
  bool operator==(const AreaRow&) const = default;
};

struct PanelRow {
  Cell cell;
  double aapv_m2 = 0.0;
  std::int64_t panel_count = 0;
  double capacity_w = 0.0;
  bool operator==(const PanelRow&) const = default;
};

struct EnergyRow {
  Cell cell;
  int year = 0;
  double kwh_per_panel = 0.0;
  double kwh = 0.0;
  bool operator==(const EnergyRow&) const = default;
};

enum class LcoeStatus { kOk, kNoCapacity, kUndefined };
std::string_view lcoe_status_name(LcoeStatus s);

struct LcoeRow {
  Cell cell;
  std::optional<double> cny_per_kwh;
  LcoeStatus status = LcoeStatus::kOk;
  double capacity_w = 0.0;
  // Energy of the first levelized year (mean over simulated weather years).
  double first_year_kwh = 0.0;
  bool operator==(const LcoeRow&) const = default;
};

struct CerRow {
  Cell cell;
  int year = 0;
  double kwh = 0.0;
  double cer_kg = 0.0;
  double cer_t() const { return cer_kg / 1000.0; }
  bool operator==(const CerRow&) const = default;
};

struct SelfSufficiencyRow {
  int year = 0;
  double generation_kwh = 0.0;
  double consumption_kwh = 0.0;
  double ratio = 0.0;
  bool operator==(const SelfSufficiencyRow&) const = default;
};

struct AssessmentReport {
  std::vector<AreaRow> areas;
  std::optional<double> all_buildings_m2;
  std::int64_t overlap_warnings = 0;
  std::vector<PanelRow> panels;
  std::vector<EnergyRow> energy;
  std::vector<LcoeRow> lcoe;
  std::vector<CerRow> cer;
  std::vector<SelfSufficiencyRow> self_sufficiency;
  double emission_factor_kg_per_kwh = kDefaultEmissionFactor;
  LcoeParams lcoe_params;
  nlohmann::json config = nlohmann::json::object();
  std::string tool_version;

  double total_cer_kg() const;
  bool operator==(const AssessmentReport&) const = default;
};

// kWh per panel per (cell, year).
using YieldTable = std::map<int, CellTable<double>>;

struct ReportInputs {
  AreaSummary areas;
  BipvFactors factors = BipvFactors::defaults();
  PanelSpec panel;
  YieldTable yields;
  CostTable costs = CostTable::defaults();
  LcoeParams lcoe_params;
  EmissionFactor emission_factor;
  // kWh per year; must cover every simulated year.
  std::map<int, double> consumption_kwh;
};

// Throws MissingInputError naming a missing year. Undefined LCOEs are
// recorded per cell, not thrown.
AssessmentReport build_report(const ReportInputs& in);

// generation / consumption. Throws ValidationError for consumption <= 0.
double self_sufficiency(double generation_kwh, double consumption_kwh);
std::map<int, double> self_sufficiency(const std::map<int, double>& generation_kwh,
                                       const std::map<int, double>& consumption_kwh);

// "year,kwh" CSV.
std::map<int, double> parse_consumption_csv(std::string_view text,
                                            std::string_view source = "<memory>");
std::map<int, double> load_consumption(const std::filesystem::path& path);

nlohmann::json report_to_json(const AssessmentReport& report);
AssessmentReport report_from_json(const nlohmann::json& doc);

// File name -> contents, in the fixed emission order.
std::vector<std::pair<std::string, std::string>> report_csv_files(
    const AssessmentReport& report);

enum class EmitFormat { kCsv, kJson, kBoth };
EmitFormat parse_emit_format(std::string_view text);

// Writes the tables into `out_dir` (created if needed) and returns the paths
// written. Rows are sorted by category code, BIPV type, then year.
std::vector<std::filesystem::path> emit(const AssessmentReport& report, EmitFormat format,
                                        const std::filesystem::path& out_dir);

}  // namespace bipv
