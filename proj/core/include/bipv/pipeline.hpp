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

// Run configuration and the command implementations behind the `bipv` tool.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "bipv/area.hpp"
#include "bipv/bipv.hpp"
#include "bipv/econ.hpp"
#include "bipv/metrics.hpp"
#include "bipv/report.hpp"
#include "bipv/solar.hpp"

namespace bipv {

struct RunConfig {
  // Directory relative paths are resolved against (the config file's).
  std::filesystem::path base_dir;

  std::filesystem::path manifest;
  std::filesystem::path predictions_dir;
  std::optional<std::filesystem::path> ground_truth_dir;
  std::map<int, std::filesystem::path> weather;
  // Years to report; defaults to the weather years.
  std::vector<int> years;
  double latitude_deg = 36.8;
  double longitude_deg = 118.05;

  std::optional<ThresholdSet> thresholds;
  std::optional<std::filesystem::path> thresholds_file;

  BipvFactors factors = BipvFactors::defaults();
  PanelSpec panel;
  PvModelParams pv_model;
  std::map<Cell, std::vector<WeightedOrientation>> orientation_overrides;
  std::map<Cell, PvModelParams> model_overrides;
  CostTable costs = CostTable::defaults();
  LcoeParams lcoe;
  EmissionFactor emission_factor;
  std::optional<std::filesystem::path> consumption_csv;
  std::filesystem::path output_dir = "out";

  std::vector<double> threshold_grid = default_threshold_grid();
  Objective objective = Objective::kPixelAccuracy;
  bool strict = false;

  // The document after --set overrides, echoed into report.json.
  nlohmann::json raw = nlohmann::json::object();
  std::vector<std::string> warnings;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
  SurfaceConfig surface(const Cell& cell) const;
};

// Applies "dotted.key=value" overrides; values parse as JSON when they can,
// otherwise they are taken as strings.
nlohmann::json apply_overrides(nlohmann::json doc, std::span<const std::string> overrides);

// Throws SchemaError for malformed documents. Does not touch the filesystem.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);

// Reads, overrides and parses; then checks that referenced inputs exist
// (MissingInputError otherwise).
RunConfig load_run_config(const std::filesystem::path& path,
                          std::span<const std::string> overrides = {});

// Referenced paths that do not exist.
std::vector<std::string> missing_paths(const RunConfig& cfg);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  int jobs = 1;
  std::vector<std::string> overrides;
};

// Output sink for progress lines and warnings.
struct Console {
  std::ostream& out;
  std::ostream& err;
};

// Thresholds in effect: inline, from thresholds_file, or 0.25 everywhere.
ThresholdSet resolve_thresholds(const RunConfig& cfg);

struct TuneResult {
  std::vector<SweepResult> sweeps;
  std::vector<std::vector<PromptScore>> prompts;  // per category
  ThresholdSet best;
};

TuneResult tune(const RunConfig& cfg, int jobs, const Console& console);

AreaSummary compute_areas(const RunConfig& cfg, int jobs, const Console& console);
YieldTable simulate_yields(const RunConfig& cfg, int jobs, const Console& console,
                           std::map<int, CellTable<YieldResult>>* details = nullptr);
AssessmentReport assess(const RunConfig& cfg, int jobs, const Console& console);

// Every problem found in the configured inputs, without computing results.
std::vector<std::string> validate_inputs(const RunConfig& cfg, int jobs,
                                         std::vector<std::string>* warnings = nullptr);

// Command entry points; return the process exit code.
int cmd_tune(const std::filesystem::path& config, const RunOptions& opts, const Console& c);
int cmd_assess(const std::filesystem::path& config, const RunOptions& opts, const Console& c);
int cmd_validate(const std::filesystem::path& config, const RunOptions& opts, const Console& c);
int cmd_area(const std::filesystem::path& config, const RunOptions& opts, const Console& c);
int cmd_yield(const std::filesystem::path& config, const RunOptions& opts, const Console& c);
int cmd_lcoe(const std::filesystem::path& config, const RunOptions& opts, const Console& c);
int cmd_carbon(const std::filesystem::path& config, const RunOptions& opts, const Console& c);

inline constexpr std::string_view kYieldCsvHeader =
    "category,bipv_type,year,kwh_per_panel,kwh_per_kwp";

std::string yield_csv(const std::map<int, CellTable<YieldResult>>& yields);

}  // namespace bipv
