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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bipv/bipv.hpp"

namespace bipv {

// Per-watt cost components, CNY/W (start) and CNY/W/yr (O&M, rent).
struct CostModel {
  double c_start = 0.0;
  double c_om = 0.0;
  double c_rent = 0.0;

  bool operator==(const CostModel&) const = default;
};

void validate_cost(const CostModel& cm);

// CNY/W due in year t (1-based); the start cost lands in year 1.
double annual_cost(const CostModel& cm, int t);

class CostTable {
 public:
  CostTable() = default;

  // Calibration defaults for the 18 cells; see the README.
  static CostTable defaults();

  void set(const Cell& cell, CostModel cm) { cells_[cell.index()] = cm; }
  void clear(const Cell& cell) { cells_[cell.index()].reset(); }
  bool has(const Cell& cell) const { return cells_[cell.index()].has_value(); }
  const CostModel& at(const Cell& cell) const;
  std::vector<std::string> violations() const;

  bool operator==(const CostTable&) const = default;

 private:
  CellTable<std::optional<CostModel>> cells_{};
};

CostTable parse_costs(const nlohmann::json& doc, CostTable base, const std::string& where);
nlohmann::json costs_to_json(const CostTable& t);

struct LcoeParams {
  double discount_rate = 0.05;
  int horizon_years = 25;
  // Annual output decline applied to the first-year energy.
  double degradation_per_yr = 0.005;

  bool operator==(const LcoeParams&) const = default;
};

void validate_lcoe_params(const LcoeParams& p);

// kWh per year, index 0 = year 1.
struct GenerationSeries {
  std::vector<double> e_t;
  bool operator==(const GenerationSeries&) const = default;
};

// e_t = first_year_kwh * (1 - degradation)^(t - 1), t = 1..n.
GenerationSeries generation_series(double first_year_kwh, double degradation_per_yr, int n);

// Discounted per-watt cost times capacity over discounted energy. Throws
// ComputationError when the discounted energy is zero.
double lcoe(const CostModel& cm, double capacity_w, const GenerationSeries& series,
            const LcoeParams& p);

inline constexpr double kDefaultEmissionFactor = 0.6838;  // kg CO2 / kWh

struct EmissionFactor {
  double kg_per_kwh = kDefaultEmissionFactor;
  bool operator==(const EmissionFactor&) const = default;
};

// Displaced emissions, kg CO2.
double cer(double e_pv_kwh, const EmissionFactor& ef);

}  // namespace bipv
