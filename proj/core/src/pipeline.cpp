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

#include "bipv/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <utility>

#include <fmt/format.h>

#include "bipv/error.hpp"
#include "bipv/parallel.hpp"
#include "bipv/version.hpp"
#include "json_util.hpp"

namespace bipv {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string require_path_string(const json& doc, std::string_view key) {
  return detail::require_string(doc, key, "config");
}

std::optional<std::string> optional_string(const json& doc, std::string_view key) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw SchemaError(fmt::format("config.{}: expected a string", key));
  return it->get<std::string>();
}

bool optional_bool(const json& doc, std::string_view key, bool fallback) {
  auto it = doc.find(key);
  if (it == doc.end()) return fallback;
  if (!it->is_boolean()) throw SchemaError(fmt::format("config.{}: expected a boolean", key));
  return it->get<bool>();
}

PvModelParams parse_pv_model(const json& doc, PvModelParams base, const std::string& where) {
  if (doc.is_null()) return base;
  if (!doc.is_object()) throw SchemaError(where + ": expected an object");
  if (auto v = detail::optional_number(doc, "noct_c", where)) base.noct_c = *v;
  if (auto v = detail::optional_number(doc, "gamma_per_c", where)) base.gamma_per_c = *v;
  if (auto v = detail::optional_number(doc, "system_derate", where)) base.system_derate = *v;
  if (auto v = detail::optional_number(doc, "albedo", where)) base.albedo = *v;
  return base;
}

std::vector<WeightedOrientation> parse_orientations(const json& doc, const std::string& where) {
  if (!doc.is_array() || doc.empty()) {
    throw SchemaError(where + ": expected a non-empty array");
  }
  std::vector<WeightedOrientation> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string w = fmt::format("{}[{}]", where, i);
    if (!doc[i].is_object()) throw SchemaError(w + ": expected an object");
    WeightedOrientation o;
    o.orientation.tilt_deg = detail::require_number(doc[i], "tilt_deg", w);
    o.orientation.azimuth_deg = detail::require_number(doc[i], "azimuth_deg", w);
    if (auto v = detail::optional_number(doc[i], "weight", w)) o.weight = *v;
    out.push_back(o);
  }
  return out;
}

// Rethrows library errors with the stage name prefixed.
template <typename Fn>
auto in_stage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("[{}] {}", stage, e.what()));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(fmt::format("[{}] {}", stage, e.what()));
  }
}

void print_warnings(const Console& c, std::span<const std::string> warnings) {
  for (const auto& w : warnings) c.err << "warning: " << w << '\n';
}

fs::path output_dir(const RunConfig& cfg, const RunOptions& opts) {
  return opts.out_dir ? *opts.out_dir : cfg.output_dir;
}

std::vector<TilePrediction> load_predictions(const RunConfig& cfg) {
  return load_prediction_dir(cfg.predictions_dir);
}

DatasetManifest load_checked_manifest(const RunConfig& cfg, const Console& console) {
  ManifestLoadOptions mo;
  mo.strict = cfg.strict;
  ManifestLoadResult r = load_manifest(cfg.manifest, mo);
  print_warnings(console, r.warnings);
  return std::move(r.manifest);
}

std::vector<int> configured_years(const RunConfig& cfg) {
  if (!cfg.years.empty()) return cfg.years;
  std::vector<int> years;
  for (const auto& [year, path] : cfg.weather) years.push_back(year);
  return years;
}

void check_tables(const RunConfig& cfg, const Console& console) {
  std::vector<std::string> problems = cfg.factors.violations();
  for (auto& v : cfg.costs.violations()) problems.push_back(std::move(v));
  for (auto& v : panel_violations(cfg.panel)) problems.push_back(std::move(v));
  if (!problems.empty()) {
    std::string msg = fmt::format("{} configuration problem(s)", problems.size());
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  print_warnings(console, panel_warnings(cfg.panel));
}

// Maps an exception to an exit code, printing it.
int report_error(const Console& c, std::string_view command, const std::exception& e) {
  if (const auto* be = dynamic_cast<const Error*>(&e)) {
    c.err << fmt::format("bipv {}: {} error: {}\n", command, error_kind_name(be->kind()),
                         be->what());
    return be->exit_code();
  }
  c.err << fmt::format("bipv {}: error: {}\n", command, e.what());
  return static_cast<int>(ErrorKind::kComputation);
}

template <typename Fn>
int run_command(std::string_view command, const Console& c, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return report_error(c, command, e);
  }
}

void write_file(const fs::path& dir, const std::string& name, const std::string& text,
                const Console& c) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw MissingInputError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }
  detail::write_text_file(dir / name, text);
  c.out << "wrote " << (dir / name).string() << '\n';
}

}  // namespace

fs::path RunConfig::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

SurfaceConfig RunConfig::surface(const Cell& cell) const {
  PvModelParams params = pv_model;
  if (auto it = model_overrides.find(cell); it != model_overrides.end()) params = it->second;
  SurfaceConfig s = default_surface_config(cell, latitude_deg, params);
  if (auto it = orientation_overrides.find(cell); it != orientation_overrides.end()) {
    s.orientations = it->second;
    validate_surface(s);
  }
  return s;
}

json apply_overrides(json doc, std::span<const std::string> overrides) {
  for (const std::string& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw SchemaError(fmt::format("--set '{}': expected key=value", item));
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::size_t start = 0;
    for (;;) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot - start);
      if (part.empty()) throw SchemaError(fmt::format("--set '{}': empty key segment", item));
      if (!node->is_object()) {
        throw SchemaError(fmt::format("--set '{}': '{}' is not an object", item,
                                      key.substr(0, start ? start - 1 : 0)));
      }
      if (dot == std::string::npos) {
        (*node)[part] = std::move(value);
        break;
      }
      json& child = (*node)[part];
      if (child.is_null()) child = json::object();
      node = &child;
      start = dot + 1;
    }
  }
  return doc;
}

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw SchemaError("config: expected a JSON object");
  RunConfig cfg;
  cfg.base_dir = base_dir;
  cfg.raw = doc;
  cfg.strict = optional_bool(doc, "strict", false);
  detail::report_unknown_keys(
      doc,
      {"manifest", "predictions_dir", "ground_truth_dir", "weather", "years", "site",
       "thresholds", "thresholds_file", "use_default_factors", "factors", "panel", "pv_model",
       "surfaces", "use_default_costs", "costs", "lcoe", "emission_factor", "consumption_csv",
       "output_dir", "sweep", "exchange_rate", "strict", "name", "description"},
      "config", cfg.strict, cfg.warnings);

  cfg.manifest = cfg.resolve(require_path_string(doc, "manifest"));
  cfg.predictions_dir = cfg.resolve(require_path_string(doc, "predictions_dir"));
  if (auto gt = optional_string(doc, "ground_truth_dir")) cfg.ground_truth_dir = cfg.resolve(*gt);

  if (auto it = doc.find("weather"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("config.weather: expected {year: path}");
    for (const auto& [key, value] : it->items()) {
      int year = 0;
      try {
        std::size_t used = 0;
        year = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw SchemaError(fmt::format("config.weather: '{}' is not a year", key));
      }
      if (!value.is_string()) {
        throw SchemaError(fmt::format("config.weather.{}: expected a path", key));
      }
      cfg.weather[year] = cfg.resolve(value.get<std::string>());
    }
  }
  if (auto it = doc.find("years"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError("config.years: expected an array");
    for (const auto& y : *it) {
      if (!y.is_number_integer()) throw SchemaError("config.years: expected integers");
      cfg.years.push_back(y.get<int>());
    }
    std::sort(cfg.years.begin(), cfg.years.end());
    cfg.years.erase(std::unique(cfg.years.begin(), cfg.years.end()), cfg.years.end());
  }

  if (auto it = doc.find("site"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("config.site: expected an object");
    detail::report_unknown_keys(*it, {"latitude_deg", "longitude_deg", "name"}, "config.site",
                                cfg.strict, cfg.warnings);
    if (auto v = detail::optional_number(*it, "latitude_deg", "config.site")) cfg.latitude_deg = *v;
    if (auto v = detail::optional_number(*it, "longitude_deg", "config.site")) {
      cfg.longitude_deg = *v;
    }
    if (!(std::abs(cfg.latitude_deg) <= 90.0) || !(std::abs(cfg.longitude_deg) <= 180.0)) {
      throw ValidationError(fmt::format("config.site: ({}, {}) is not a valid location",
                                        cfg.latitude_deg, cfg.longitude_deg));
    }
  }

  const bool has_inline = doc.contains("thresholds");
  const bool has_file = doc.contains("thresholds_file");
  if (has_inline && has_file) {
    throw SchemaError("config: 'thresholds' and 'thresholds_file' are mutually exclusive");
  }
  if (has_inline) cfg.thresholds = parse_thresholds(doc.at("thresholds"), "config.thresholds");
  if (has_file) cfg.thresholds_file = cfg.resolve(require_path_string(doc, "thresholds_file"));

  const BipvFactors factor_base =
      optional_bool(doc, "use_default_factors", true) ? BipvFactors::defaults() : BipvFactors{};
  cfg.factors = parse_factors(doc.value("factors", json()), factor_base, "config.factors");
  cfg.panel = parse_panel(doc.value("panel", json()), PanelSpec{}, "config.panel");
  cfg.pv_model = parse_pv_model(doc.value("pv_model", json()), PvModelParams{}, "config.pv_model");

  if (auto it = doc.find("surfaces"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("config.surfaces: expected an object");
    for (const auto& [ckey, row] : it->items()) {
      BuildingCategory category;
      try {
        category = parse_category(ckey);
      } catch (const InvalidParameter&) {
        throw SchemaError(fmt::format("config.surfaces: unknown category '{}'", ckey));
      }
      if (!row.is_object()) {
        throw SchemaError(fmt::format("config.surfaces.{}: expected an object", ckey));
      }
      for (const auto& [tkey, entry] : row.items()) {
        BipvType type;
        try {
          type = parse_bipv_type(tkey);
        } catch (const InvalidParameter&) {
          throw SchemaError(fmt::format("config.surfaces.{}: unknown BIPV type '{}'", ckey, tkey));
        }
        const std::string w = fmt::format("config.surfaces.{}.{}", ckey, tkey);
        if (!entry.is_object()) throw SchemaError(w + ": expected an object");
        const Cell cell{category, type};
        if (auto o = entry.find("orientations"); o != entry.end()) {
          cfg.orientation_overrides[cell] = parse_orientations(*o, w + ".orientations");
        }
        if (auto m = entry.find("pv_model"); m != entry.end()) {
          cfg.model_overrides[cell] = parse_pv_model(*m, cfg.pv_model, w + ".pv_model");
        }
      }
    }
  }

  const CostTable cost_base =
      optional_bool(doc, "use_default_costs", true) ? CostTable::defaults() : CostTable{};
  cfg.costs = parse_costs(doc.value("costs", json()), cost_base, "config.costs");

  if (auto it = doc.find("lcoe"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("config.lcoe: expected an object");
    if (auto v = detail::optional_number(*it, "discount_rate", "config.lcoe")) {
      cfg.lcoe.discount_rate = *v;
    }
    if (it->contains("horizon_years")) {
      cfg.lcoe.horizon_years =
          static_cast<int>(detail::require_integer(*it, "horizon_years", "config.lcoe"));
    }
    if (auto v = detail::optional_number(*it, "degradation_per_yr", "config.lcoe")) {
      cfg.lcoe.degradation_per_yr = *v;
    }
    validate_lcoe_params(cfg.lcoe);
  }
  if (auto v = detail::optional_number(doc, "emission_factor", "config")) {
    if (!(*v > 0.0)) throw ValidationError(fmt::format("config.emission_factor {} must be > 0", *v));
    cfg.emission_factor.kg_per_kwh = *v;
  }
  if (auto p = optional_string(doc, "consumption_csv")) cfg.consumption_csv = cfg.resolve(*p);
  if (auto p = optional_string(doc, "output_dir")) cfg.output_dir = cfg.resolve(*p);
  else cfg.output_dir = cfg.resolve("out");

  if (auto it = doc.find("sweep"); it != doc.end()) {
    if (!it->is_object()) throw SchemaError("config.sweep: expected an object");
    if (auto g = it->find("grid"); g != it->end()) {
      if (!g->is_array()) throw SchemaError("config.sweep.grid: expected an array");
      cfg.threshold_grid.clear();
      for (const auto& t : *g) {
        if (!t.is_number()) throw SchemaError("config.sweep.grid: expected numbers");
        cfg.threshold_grid.push_back(t.get<double>());
      }
    }
    if (auto o = it->find("objective"); o != it->end()) {
      if (!o->is_string()) throw SchemaError("config.sweep.objective: expected a string");
      try {
        cfg.objective = parse_objective(o->get<std::string>());
      } catch (const InvalidParameter& e) {
        throw SchemaError(fmt::format("config.sweep.objective: {}", e.what()));
      }
    }
  }
  if (auto it = doc.find("exchange_rate"); it != doc.end() && !it->is_number()) {
    throw SchemaError("config.exchange_rate: expected a number");
  }
  return cfg;
}

std::vector<std::string> missing_paths(const RunConfig& cfg) {
  std::vector<std::string> out;
  auto check = [&](const fs::path& p, std::string_view what) {
    if (!fs::exists(p)) out.push_back(fmt::format("{} not found: {}", what, p.string()));
  };
  check(cfg.manifest, "manifest");
  check(cfg.predictions_dir, "predictions_dir");
  if (cfg.ground_truth_dir) check(*cfg.ground_truth_dir, "ground_truth_dir");
  for (const auto& [year, path] : cfg.weather) {
    check(path, fmt::format("weather for year {}", year));
  }
  if (cfg.thresholds_file) check(*cfg.thresholds_file, "thresholds_file");
  if (cfg.consumption_csv) check(*cfg.consumption_csv, "consumption_csv");
  return out;
}

RunConfig load_run_config(const fs::path& path, std::span<const std::string> overrides) {
  const json doc = apply_overrides(detail::read_json_file(path), overrides);
  RunConfig cfg = parse_run_config(doc, path.parent_path());
  if (const auto missing = missing_paths(cfg); !missing.empty()) {
    throw MissingInputError(missing.front());
  }
  return cfg;
}

ThresholdSet resolve_thresholds(const RunConfig& cfg) {
  if (cfg.thresholds) return *cfg.thresholds;
  if (cfg.thresholds_file) {
    return parse_thresholds(detail::read_json_file(*cfg.thresholds_file),
                            cfg.thresholds_file->string());
  }
  return ThresholdSet::uniform(0.25);
}

TuneResult tune(const RunConfig& cfg, int jobs, const Console& console) {
  if (!cfg.ground_truth_dir) throw MissingInputError("tune needs ground_truth_dir in the config");
  const std::vector<GroundTruthMap> truth = load_ground_truth_dir(*cfg.ground_truth_dir);
  const GroundTruthIndex index(truth);
  std::vector<TilePrediction> preds;
  std::int64_t unlabeled = 0;
  for (auto& p : load_predictions(cfg)) {
    if (index.find(p.tile_id)) {
      preds.push_back(std::move(p));
    } else {
      ++unlabeled;
    }
  }
  if (preds.empty()) throw MissingInputError("no labeled tiles: no prediction has ground truth");
  if (unlabeled > 0) {
    console.err << fmt::format("warning: {} predicted tile(s) without ground truth skipped\n",
                               unlabeled);
  }

  TuneResult r;
  EvaluationOptions eo;
  eo.jobs = jobs;
  for (BuildingCategory c : kAllCategories) {
    SweepResult s = threshold_sweep(preds, index, c, cfg.threshold_grid, cfg.objective, eo);
    r.best[c] = s.best_threshold;
    r.prompts.push_back(compare_prompts(preds, index, c, s.best_threshold, eo));
    r.sweeps.push_back(std::move(s));
  }
  return r;
}

AreaSummary compute_areas(const RunConfig& cfg, int jobs, const Console& console) {
  const DatasetManifest manifest = load_checked_manifest(cfg, console);
  const std::vector<TilePrediction> preds = load_predictions(cfg);
  const ThresholdSet thresholds = resolve_thresholds(cfg);
  AreaSummary s = aggregate_areas(preds, manifest, thresholds, jobs);
  for (const auto& id : s.overlap_tiles) {
    console.err << fmt::format(
        "warning: tile {}: category masks exceed the all-buildings mask; Others clamped to 0\n",
        id);
  }
  return s;
}

YieldTable simulate_yields(const RunConfig& cfg, int jobs, const Console& console,
                           std::map<int, CellTable<YieldResult>>* details) {
  const std::vector<int> years = configured_years(cfg);
  if (years.empty()) throw MissingInputError("no weather years configured");
  for (int year : years) {
    if (!cfg.weather.contains(year)) {
      throw MissingInputError(fmt::format("no weather file configured for year {}", year));
    }
  }

  std::vector<WeatherSeries> series(years.size());
  parallel_for(years.size(), jobs, [&](std::size_t i) {
    const int year = years[i];
    const fs::path& path = cfg.weather.at(year);
    if (!fs::exists(path)) {
      throw MissingInputError(
          fmt::format("weather for year {} not found: {}", year, path.string()));
    }
    series[i] = load_weather(path);
    if (series[i].records.empty()) {
      throw ValidationError(fmt::format("weather for year {} is empty", year));
    }
    const int got = local_year(series[i].records.front().time);
    if (got != year) {
      throw ValidationError(
          fmt::format("weather file for year {} starts in {}: {}", year, got, path.string()));
    }
  });

  std::array<SurfaceConfig, kNumCells> surfaces;
  for (const Cell& cell : all_cells()) surfaces[cell.index()] = cfg.surface(cell);

  const std::size_t n = years.size() * kNumCells;
  std::vector<YieldResult> results(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const std::size_t y = i / kNumCells;
    const std::size_t c = i % kNumCells;
    results[i] = annual_yield(series[y], surfaces[c], cfg.panel, cfg.latitude_deg,
                              cfg.longitude_deg);
  });

  YieldTable table;
  for (std::size_t y = 0; y < years.size(); ++y) {
    auto& row = table[years[y]];
    for (std::size_t c = 0; c < static_cast<std::size_t>(kNumCells); ++c) {
      const YieldResult& r = results[y * kNumCells + c];
      row[c] = r.kwh_per_panel_yr;
      // Gap warnings are identical across cells; report them once per year.
      if (c == 0) {
        for (const auto& w : r.warnings) {
          console.err << fmt::format("warning: weather {}: {}\n", years[y], w);
        }
      }
    }
    if (details) {
      auto& d = (*details)[years[y]];
      for (std::size_t c = 0; c < static_cast<std::size_t>(kNumCells); ++c) {
        d[c] = std::move(results[y * kNumCells + c]);
      }
    }
  }
  return table;
}

AssessmentReport assess(const RunConfig& cfg, int jobs, const Console& console) {
  in_stage("config", [&] { check_tables(cfg, console); });
  const AreaSummary areas = in_stage("area", [&] { return compute_areas(cfg, jobs, console); });
  YieldTable yields = in_stage("yield", [&] { return simulate_yields(cfg, jobs, console); });
  std::map<int, double> consumption = in_stage("consumption", [&] {
    if (!cfg.consumption_csv) throw MissingInputError("consumption_csv is not configured");
    return load_consumption(*cfg.consumption_csv);
  });
  return in_stage("report", [&] {
    ReportInputs in;
    in.areas = areas;
    in.factors = cfg.factors;
    in.panel = cfg.panel;
    in.yields = std::move(yields);
    in.costs = cfg.costs;
    in.lcoe_params = cfg.lcoe;
    in.emission_factor = cfg.emission_factor;
    in.consumption_kwh = std::move(consumption);
    AssessmentReport r = build_report(in);
    r.config = cfg.raw;
    r.tool_version = std::string(kVersion);
    return r;
  });
}

std::vector<std::string> validate_inputs(const RunConfig& cfg, int jobs,
                                         std::vector<std::string>* warnings) {
  std::vector<std::string> out = missing_paths(cfg);
  auto add_all = [&](std::vector<std::string> v) {
    for (auto& s : v) out.push_back(std::move(s));
  };
  auto guarded = [&](std::string_view what, auto&& fn) {
    try {
      fn();
    } catch (const SchemaError&) {
      throw;
    } catch (const std::exception& e) {
      out.push_back(fmt::format("{}: {}", what, e.what()));
    }
  };

  add_all(cfg.factors.violations());
  add_all(cfg.costs.violations());
  add_all(panel_violations(cfg.panel));
  if (warnings) {
    for (auto& w : panel_warnings(cfg.panel)) warnings->push_back(std::move(w));
    for (const auto& w : cfg.warnings) warnings->push_back(w);
  }
  for (const Cell& cell : all_cells()) {
    guarded(fmt::format("surface {}", cell_label(cell)), [&] { (void)cfg.surface(cell); });
  }
  guarded("thresholds", [&] { (void)resolve_thresholds(cfg); });

  std::optional<DatasetManifest> manifest;
  if (fs::exists(cfg.manifest)) {
    guarded("manifest", [&] {
      ManifestLoadOptions mo;
      mo.strict = cfg.strict;
      mo.check_declared_area = false;
      ManifestLoadResult r = load_manifest(cfg.manifest, mo);
      if (warnings) {
        for (auto& w : r.warnings) warnings->push_back(std::move(w));
      }
      manifest = std::move(r.manifest);
    });
  }
  if (manifest) {
    for (const auto& tile : manifest->tiles) add_all(tile_violations(tile));
  }

  if (fs::exists(cfg.predictions_dir)) {
    guarded("predictions", [&] {
      const std::vector<TilePrediction> preds = load_predictions(cfg);
      std::vector<std::vector<std::string>> per(preds.size());
      parallel_for(preds.size(), jobs, [&](std::size_t i) {
        const TilePrediction& p = preds[i];
        const TileMeta* tile = manifest ? manifest->find(p.tile_id) : nullptr;
        if (manifest && !tile) {
          per[i].push_back(fmt::format("prediction {}: tile not in manifest", p.tile_id));
        }
        if (tile) per[i] = prediction_violations(p, *tile);
      });
      for (auto& v : per) add_all(std::move(v));
      if (warnings) {
        for (const auto& p : preds) {
          const auto n = std::count_if(p.instances.begin(), p.instances.end(), [](const auto& i) {
            return i.category == BuildingCategory::kOthers;
          });
          if (n > 0) {
            warnings->push_back(fmt::format(
                "prediction {}: {} explicit Others instance(s) are ignored; Others is derived "
                "from the all-buildings stream",
                p.tile_id, n));
          }
        }
      }
    });
  }
  if (cfg.ground_truth_dir && fs::exists(*cfg.ground_truth_dir)) {
    guarded("ground truth", [&] { (void)load_ground_truth_dir(*cfg.ground_truth_dir); });
  }
  for (int year : configured_years(cfg)) {
    if (!cfg.weather.contains(year)) {
      out.push_back(fmt::format("no weather file configured for year {}", year));
    }
  }
  for (const auto& [year, path] : cfg.weather) {
    if (!fs::exists(path)) continue;
    guarded(fmt::format("weather {}", year), [&] { (void)load_weather(path); });
  }
  if (cfg.consumption_csv && fs::exists(*cfg.consumption_csv)) {
    guarded("consumption", [&] {
      const auto consumption = load_consumption(*cfg.consumption_csv);
      for (int year : configured_years(cfg)) {
        if (!consumption.contains(year)) {
          out.push_back(fmt::format("consumption: no data for year {}", year));
        }
      }
    });
  }
  return out;
}

std::string yield_csv(const std::map<int, CellTable<YieldResult>>& yields) {
  std::string out = std::string(kYieldCsvHeader) + "\n";
  for (const Cell& cell : all_cells()) {
    for (const auto& [year, table] : yields) {
      const YieldResult& r = table[cell.index()];
      out += fmt::format("{},{},{},{:.6f},{:.6f}\n", category_key(cell.category),
                         bipv_key(cell.type), year, r.kwh_per_panel_yr, r.kwh_per_kwp_yr);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands.

int cmd_tune(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("tune", c, [&] {
    const RunConfig cfg = in_stage("config", [&] { return load_run_config(config, opts.overrides); });
    print_warnings(c, cfg.warnings);
    const TuneResult r = in_stage("tune", [&] { return tune(cfg, opts.jobs, c); });
    const fs::path dir = output_dir(cfg, opts);
    write_file(dir, "sweep.csv", sweep_csv(r.sweeps), c);
    write_file(dir, "sweep.json", sweep_json(r.sweeps).dump(2) + "\n", c);
    std::string prompts;
    for (std::size_t i = 0; i < r.sweeps.size(); ++i) {
      std::string part = prompt_csv(r.sweeps[i].category, r.sweeps[i].best_threshold, r.prompts[i]);
      if (i > 0) part.erase(0, part.find('\n') + 1);
      prompts += part;
    }
    write_file(dir, "prompts.csv", prompts, c);
    write_file(dir, "thresholds.json", thresholds_to_json(r.best).dump(2) + "\n", c);
    for (const auto& s : r.sweeps) {
      const auto& b = s.best();
      c.out << fmt::format("{}: best threshold {} ({} = {:.4f})\n", category_key(s.category),
                           s.best_threshold, objective_name(s.objective),
                           s.objective == Objective::kIou ? b.metrics.iou : b.metrics.pa);
    }
    return 0;
  });
}

int cmd_assess(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("assess", c, [&] {
    const RunConfig cfg = in_stage("config", [&] { return load_run_config(config, opts.overrides); });
    print_warnings(c, cfg.warnings);
    const AssessmentReport report = assess(cfg, opts.jobs, c);
    const fs::path dir = output_dir(cfg, opts);
    for (const auto& p : in_stage("emit", [&] { return emit(report, EmitFormat::kBoth, dir); })) {
      c.out << "wrote " << p.string() << '\n';
    }
    int undefined = 0;
    for (const auto& row : report.lcoe) {
      if (row.status == LcoeStatus::kUndefined) {
        c.err << fmt::format("bipv assess: [econ] LCOE undefined for {} (zero energy)\n",
                             cell_label(row.cell));
        ++undefined;
      }
    }
    return undefined > 0 ? static_cast<int>(ErrorKind::kComputation) : 0;
  });
}

int cmd_validate(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("validate", c, [&] {
    const json doc = apply_overrides(detail::read_json_file(config), opts.overrides);
    const RunConfig cfg = parse_run_config(doc, config.parent_path());
    std::vector<std::string> warnings;
    const std::vector<std::string> violations = validate_inputs(cfg, opts.jobs, &warnings);
    print_warnings(c, warnings);
    for (const auto& v : violations) c.out << "violation: " << v << '\n';
    c.out << fmt::format("{} violation(s)\n", violations.size());
    return violations.empty() ? 0 : static_cast<int>(ErrorKind::kValidation);
  });
}

int cmd_area(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("area", c, [&] {
    const RunConfig cfg = in_stage("config", [&] { return load_run_config(config, opts.overrides); });
    print_warnings(c, cfg.warnings);
    const AreaSummary s = in_stage("area", [&] { return compute_areas(cfg, opts.jobs, c); });
    const fs::path dir = output_dir(cfg, opts);
    write_file(dir, "areas.csv", areas_csv(s), c);
    write_file(dir, "areas.json", areas_json(s).dump(2) + "\n", c);
    return 0;
  });
}

int cmd_yield(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("yield", c, [&] {
    const RunConfig cfg = in_stage("config", [&] { return load_run_config(config, opts.overrides); });
    print_warnings(c, cfg.warnings);
    std::map<int, CellTable<YieldResult>> details;
    in_stage("yield", [&] { return simulate_yields(cfg, opts.jobs, c, &details); });
    write_file(output_dir(cfg, opts), "yield.csv", yield_csv(details), c);
    return 0;
  });
}

int cmd_lcoe(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("lcoe", c, [&] {
    const RunConfig cfg = in_stage("config", [&] { return load_run_config(config, opts.overrides); });
    print_warnings(c, cfg.warnings);
    const AssessmentReport r = assess(cfg, opts.jobs, c);
    const fs::path dir = output_dir(cfg, opts);
    for (const auto& [name, text] : report_csv_files(r)) {
      if (name == "panels.csv" || name == "lcoe.csv") write_file(dir, name, text, c);
    }
    bool undefined = false;
    for (const auto& row : r.lcoe) {
      if (row.status == LcoeStatus::kUndefined) {
        c.err << fmt::format("bipv lcoe: [econ] LCOE undefined for {} (zero energy)\n",
                             cell_label(row.cell));
        undefined = true;
      }
    }
    return undefined ? static_cast<int>(ErrorKind::kComputation) : 0;
  });
}

int cmd_carbon(const fs::path& config, const RunOptions& opts, const Console& c) {
  return run_command("carbon", c, [&] {
    const RunConfig cfg = in_stage("config", [&] { return load_run_config(config, opts.overrides); });
    print_warnings(c, cfg.warnings);
    const AssessmentReport r = assess(cfg, opts.jobs, c);
    const fs::path dir = output_dir(cfg, opts);
    for (const auto& [name, text] : report_csv_files(r)) {
      if (name == "energy.csv" || name == "cer.csv" || name == "self_sufficiency.csv") {
        write_file(dir, name, text, c);
      }
    }
    c.out << fmt::format("total CER {:.1f} t CO2\n", r.total_cer_kg() / 1000.0);
    return 0;
  });
}

}  // namespace bipv
