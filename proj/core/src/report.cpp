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

#include "bipv/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "bipv/error.hpp"
#include "json_util.hpp"

namespace bipv {

std::string_view lcoe_status_name(LcoeStatus s) {
  switch (s) {
    case LcoeStatus::kOk: return "ok";
    case LcoeStatus::kNoCapacity: return "no_capacity";
    case LcoeStatus::kUndefined: return "undefined";
  }
  return "?";
}

namespace {

LcoeStatus parse_lcoe_status(std::string_view s) {
  for (auto v : {LcoeStatus::kOk, LcoeStatus::kNoCapacity, LcoeStatus::kUndefined}) {
    if (lcoe_status_name(v) == s) return v;
  }
  throw SchemaError(fmt::format("unknown LCOE status '{}'", s));
}

}  // namespace

double AssessmentReport::total_cer_kg() const {
  double total = 0.0;
  for (const auto& r : cer) total += r.cer_kg;
  return total;
}

double self_sufficiency(double generation_kwh, double consumption_kwh) {
  if (!(consumption_kwh > 0.0)) {
    throw ValidationError(
        fmt::format("consumption {} kWh must be positive", consumption_kwh));
  }
  if (!(generation_kwh >= 0.0)) {
    throw ValidationError(fmt::format("generation {} kWh must be >= 0", generation_kwh));
  }
  return generation_kwh / consumption_kwh;
}

std::map<int, double> self_sufficiency(const std::map<int, double>& generation_kwh,
                                       const std::map<int, double>& consumption_kwh) {
  std::map<int, double> out;
  for (const auto& [year, gen] : generation_kwh) {
    auto it = consumption_kwh.find(year);
    if (it == consumption_kwh.end()) {
      throw MissingInputError(fmt::format("no consumption data for year {}", year));
    }
    try {
      out[year] = self_sufficiency(gen, it->second);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("year {}: {}", year, e.what()));
    }
  }
  return out;
}

AssessmentReport build_report(const ReportInputs& in) {
  if (in.yields.empty()) throw MissingInputError("no simulated weather years");
  validate_lcoe_params(in.lcoe_params);

  AssessmentReport r;
  r.emission_factor_kg_per_kwh = in.emission_factor.kg_per_kwh;
  r.lcoe_params = in.lcoe_params;
  for (BuildingCategory c : kAllCategories) r.areas.push_back({c, in.areas.areas[c]});
  r.all_buildings_m2 = in.areas.areas.all_buildings_m2;
  r.overlap_warnings = in.areas.overlap_warnings;

  const InstallPlan plan = build_install_plan(in.areas.areas, in.factors, in.panel);
  for (const Cell& cell : all_cells()) {
    const InstallCell& ic = plan[cell];
    r.panels.push_back({cell, ic.aapv_m2, ic.panel_count, ic.capacity_w});
  }

  std::map<int, double> generation;
  for (const auto& [year, table] : in.yields) {
    if (!in.consumption_kwh.contains(year)) {
      throw MissingInputError(fmt::format("no consumption data for year {}", year));
    }
    generation[year] = 0.0;
  }

  for (const Cell& cell : all_cells()) {
    const InstallCell& ic = plan[cell];
    double energy_sum = 0.0;
    for (const auto& [year, table] : in.yields) {
      const double per_panel = table[cell.index()];
      if (!(per_panel >= 0.0)) {
        throw ComputationError(fmt::format("{} year {}: yield {} kWh/panel is invalid",
                                           cell_label(cell), year, per_panel));
      }
      const double kwh = static_cast<double>(ic.panel_count) * per_panel;
      r.energy.push_back({cell, year, per_panel, kwh});
      r.cer.push_back({cell, year, kwh, cer(kwh, in.emission_factor)});
      generation[year] += kwh;
      energy_sum += kwh;
    }

    LcoeRow row;
    row.cell = cell;
    row.capacity_w = ic.capacity_w;
    row.first_year_kwh = energy_sum / static_cast<double>(in.yields.size());
    if (ic.panel_count == 0) {
      row.status = LcoeStatus::kNoCapacity;
    } else {
      const GenerationSeries series =
          generation_series(row.first_year_kwh, in.lcoe_params.degradation_per_yr,
                            in.lcoe_params.horizon_years);
      try {
        row.cny_per_kwh = lcoe(in.costs.at(cell), ic.capacity_w, series, in.lcoe_params);
        row.status = LcoeStatus::kOk;
      } catch (const ComputationError&) {
        row.status = LcoeStatus::kUndefined;
      }
    }
    r.lcoe.push_back(row);
  }

  for (const auto& [year, ratio] : self_sufficiency(generation, in.consumption_kwh)) {
    r.self_sufficiency.push_back(
        {year, generation.at(year), in.consumption_kwh.at(year), ratio});
  }
  return r;
}

// ---------------------------------------------------------------------------

std::map<int, double> parse_consumption_csv(std::string_view text, std::string_view source) {
  std::map<int, double> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = false;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != "year,kwh") {
        throw SchemaError(fmt::format("{}:{}: expected header 'year,kwh'", source, line_no));
      }
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ValidationError(fmt::format("{}:{}: expected 'year,kwh'", source, line_no));
    }
    const std::string_view ys = line.substr(0, comma);
    const std::string_view ks = line.substr(comma + 1);
    int year = 0;
    double kwh = 0.0;
    auto [p1, e1] = std::from_chars(ys.data(), ys.data() + ys.size(), year);
    auto [p2, e2] = std::from_chars(ks.data(), ks.data() + ks.size(), kwh);
    if (e1 != std::errc() || p1 != ys.data() + ys.size() || e2 != std::errc() ||
        p2 != ks.data() + ks.size()) {
      throw ValidationError(fmt::format("{}:{}: malformed row '{}'", source, line_no, line));
    }
    if (!(kwh > 0.0)) {
      throw ValidationError(
          fmt::format("{}:{}: consumption must be positive", source, line_no));
    }
    if (!out.emplace(year, kwh).second) {
      throw ValidationError(fmt::format("{}:{}: duplicate year {}", source, line_no, year));
    }
  }
  if (!header) throw SchemaError(fmt::format("{}: empty consumption file", source));
  return out;
}

std::map<int, double> load_consumption(const std::filesystem::path& path) {
  return parse_consumption_csv(detail::read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json cell_json(const Cell& c) {
  return {{"category", category_key(c.category)}, {"bipv_type", bipv_key(c.type)}};
}

Cell cell_from_json(const json& j, const std::string& where) {
  try {
    return {parse_category(detail::require_string(j, "category", where)),
            parse_bipv_type(detail::require_string(j, "bipv_type", where))};
  } catch (const InvalidParameter& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

json lcoe_params_json(const LcoeParams& p) {
  return {{"discount_rate", p.discount_rate},
          {"horizon_years", p.horizon_years},
          {"degradation_per_yr", p.degradation_per_yr}};
}

template <typename Row, typename Key>
void sort_rows(std::vector<Row>& rows, Key key) {
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const Row& a, const Row& b) { return key(a) < key(b); });
}

AssessmentReport sorted(AssessmentReport r) {
  sort_rows(r.areas, [](const AreaRow& a) { return category_code(a.category); });
  sort_rows(r.panels, [](const PanelRow& a) { return a.cell; });
  sort_rows(r.energy, [](const EnergyRow& a) { return std::make_pair(a.cell, a.year); });
  sort_rows(r.lcoe, [](const LcoeRow& a) { return a.cell; });
  sort_rows(r.cer, [](const CerRow& a) { return std::make_pair(a.cell, a.year); });
  sort_rows(r.self_sufficiency, [](const SelfSufficiencyRow& a) { return a.year; });
  return r;
}

}  // namespace

json report_to_json(const AssessmentReport& report) {
  const AssessmentReport r = sorted(report);
  json areas = json::array();
  for (const auto& a : r.areas) {
    areas.push_back({{"category", category_key(a.category)},
                     {"total_rooftop_m2", a.total_rooftop_m2}});
  }
  json panels = json::array();
  for (const auto& p : r.panels) {
    json j = cell_json(p.cell);
    j["aapv_m2"] = p.aapv_m2;
    j["panel_count"] = p.panel_count;
    j["capacity_w"] = p.capacity_w;
    panels.push_back(std::move(j));
  }
  json energy = json::array();
  for (const auto& e : r.energy) {
    json j = cell_json(e.cell);
    j["year"] = e.year;
    j["kwh_per_panel"] = e.kwh_per_panel;
    j["kwh"] = e.kwh;
    energy.push_back(std::move(j));
  }
  json lcoe_rows = json::array();
  for (const auto& l : r.lcoe) {
    json j = cell_json(l.cell);
    j["lcoe_cny_per_kwh"] = l.cny_per_kwh ? json(*l.cny_per_kwh) : json(nullptr);
    j["status"] = lcoe_status_name(l.status);
    j["capacity_w"] = l.capacity_w;
    j["first_year_kwh"] = l.first_year_kwh;
    lcoe_rows.push_back(std::move(j));
  }
  json cer_rows = json::array();
  for (const auto& c : r.cer) {
    json j = cell_json(c.cell);
    j["year"] = c.year;
    j["kwh"] = c.kwh;
    j["cer_kg"] = c.cer_kg;
    cer_rows.push_back(std::move(j));
  }
  json ss = json::array();
  for (const auto& s : r.self_sufficiency) {
    ss.push_back({{"year", s.year},
                  {"generation_kwh", s.generation_kwh},
                  {"consumption_kwh", s.consumption_kwh},
                  {"ratio", s.ratio}});
  }
  return {{"tool_version", r.tool_version},
          {"config", r.config},
          {"emission_factor_kg_per_kwh", r.emission_factor_kg_per_kwh},
          {"lcoe_params", lcoe_params_json(r.lcoe_params)},
          {"areas",
           {{"rows", std::move(areas)},
            {"all_buildings_m2",
             r.all_buildings_m2 ? json(*r.all_buildings_m2) : json(nullptr)},
            {"overlap_warnings", r.overlap_warnings}}},
          {"panels", std::move(panels)},
          {"energy", std::move(energy)},
          {"lcoe", std::move(lcoe_rows)},
          {"cer", std::move(cer_rows)},
          {"self_sufficiency", std::move(ss)}};
}

AssessmentReport report_from_json(const json& doc) {
  using detail::require;
  using detail::require_integer;
  using detail::require_number;
  const std::string w = "report";
  AssessmentReport r;
  r.tool_version = detail::require_string(doc, "tool_version", w);
  r.config = require(doc, "config", w);
  r.emission_factor_kg_per_kwh = require_number(doc, "emission_factor_kg_per_kwh", w);
  const json& lp = require(doc, "lcoe_params", w);
  r.lcoe_params.discount_rate = require_number(lp, "discount_rate", w + ".lcoe_params");
  r.lcoe_params.horizon_years =
      static_cast<int>(require_integer(lp, "horizon_years", w + ".lcoe_params"));
  r.lcoe_params.degradation_per_yr =
      require_number(lp, "degradation_per_yr", w + ".lcoe_params");

  const json& areas = require(doc, "areas", w);
  for (const auto& a : require(areas, "rows", w + ".areas")) {
    r.areas.push_back(
        {parse_category(detail::require_string(a, "category", w + ".areas")),
         require_number(a, "total_rooftop_m2", w + ".areas")});
  }
  r.all_buildings_m2 = detail::optional_number(areas, "all_buildings_m2", w + ".areas");
  r.overlap_warnings = require_integer(areas, "overlap_warnings", w + ".areas");

  for (const auto& p : require(doc, "panels", w)) {
    r.panels.push_back({cell_from_json(p, w + ".panels"), require_number(p, "aapv_m2", w),
                        require_integer(p, "panel_count", w),
                        require_number(p, "capacity_w", w)});
  }
  for (const auto& e : require(doc, "energy", w)) {
    r.energy.push_back({cell_from_json(e, w + ".energy"),
                        static_cast<int>(require_integer(e, "year", w)),
                        require_number(e, "kwh_per_panel", w), require_number(e, "kwh", w)});
  }
  for (const auto& l : require(doc, "lcoe", w)) {
    LcoeRow row;
    row.cell = cell_from_json(l, w + ".lcoe");
    row.cny_per_kwh = detail::optional_number(l, "lcoe_cny_per_kwh", w + ".lcoe");
    row.status = parse_lcoe_status(detail::require_string(l, "status", w + ".lcoe"));
    row.capacity_w = require_number(l, "capacity_w", w);
    row.first_year_kwh = require_number(l, "first_year_kwh", w);
    r.lcoe.push_back(row);
  }
  for (const auto& c : require(doc, "cer", w)) {
    r.cer.push_back({cell_from_json(c, w + ".cer"),
                     static_cast<int>(require_integer(c, "year", w)),
                     require_number(c, "kwh", w), require_number(c, "cer_kg", w)});
  }
  for (const auto& s : require(doc, "self_sufficiency", w)) {
    r.self_sufficiency.push_back({static_cast<int>(require_integer(s, "year", w)),
                                  require_number(s, "generation_kwh", w),
                                  require_number(s, "consumption_kwh", w),
                                  require_number(s, "ratio", w)});
  }
  return r;
}

std::vector<std::pair<std::string, std::string>> report_csv_files(
    const AssessmentReport& report) {
  const AssessmentReport r = sorted(report);
  std::vector<std::pair<std::string, std::string>> files;

  std::string areas = "category,total_rooftop_m2\n";
  for (const auto& a : r.areas) {
    areas += fmt::format("{},{:.3f}\n", category_key(a.category), a.total_rooftop_m2);
  }
  if (r.all_buildings_m2) areas += fmt::format("all_buildings,{:.3f}\n", *r.all_buildings_m2);
  files.emplace_back("areas.csv", std::move(areas));

  std::string panels = "category,bipv_type,aapv_m2,panel_count,capacity_w\n";
  for (const auto& p : r.panels) {
    panels += fmt::format("{},{},{:.3f},{},{:.3f}\n", category_key(p.cell.category),
                          bipv_key(p.cell.type), p.aapv_m2, p.panel_count, p.capacity_w);
  }
  files.emplace_back("panels.csv", std::move(panels));

  std::string energy = "category,bipv_type,year,kwh\n";
  for (const auto& e : r.energy) {
    energy += fmt::format("{},{},{},{:.3f}\n", category_key(e.cell.category),
                          bipv_key(e.cell.type), e.year, e.kwh);
  }
  files.emplace_back("energy.csv", std::move(energy));

  std::string lcoe_csv = "category,bipv_type,lcoe_cny_per_kwh,status\n";
  for (const auto& l : r.lcoe) {
    lcoe_csv += fmt::format("{},{},{},{}\n", category_key(l.cell.category),
                            bipv_key(l.cell.type),
                            l.cny_per_kwh ? fmt::format("{:.6f}", *l.cny_per_kwh) : "",
                            lcoe_status_name(l.status));
  }
  files.emplace_back("lcoe.csv", std::move(lcoe_csv));

  std::string cer_csv = "category,bipv_type,year,cer_t_co2\n";
  for (const auto& c : r.cer) {
    cer_csv += fmt::format("{},{},{},{:.6f}\n", category_key(c.cell.category),
                           bipv_key(c.cell.type), c.year, c.cer_t());
  }
  files.emplace_back("cer.csv", std::move(cer_csv));

  std::string ss = "year,generation_kwh,generation_twh,consumption_kwh,ratio\n";
  for (const auto& s : r.self_sufficiency) {
    ss += fmt::format("{},{:.3f},{:.2f},{:.3f},{:.6f}\n", s.year, s.generation_kwh,
                      s.generation_kwh / 1e9, s.consumption_kwh, s.ratio);
  }
  files.emplace_back("self_sufficiency.csv", std::move(ss));
  return files;
}

EmitFormat parse_emit_format(std::string_view text) {
  if (text == "csv") return EmitFormat::kCsv;
  if (text == "json") return EmitFormat::kJson;
  if (text == "both" || text == "all") return EmitFormat::kBoth;
  throw InvalidParameter(fmt::format("unknown output format '{}'", text));
}

std::vector<std::filesystem::path> emit(const AssessmentReport& report, EmitFormat format,
                                        const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw MissingInputError(
        fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));
  }
  std::vector<std::filesystem::path> written;
  if (format == EmitFormat::kCsv || format == EmitFormat::kBoth) {
    for (const auto& [name, text] : report_csv_files(report)) {
      const auto path = out_dir / name;
      detail::write_text_file(path, text);
      written.push_back(path);
    }
  }
  if (format == EmitFormat::kJson || format == EmitFormat::kBoth) {
    const auto path = out_dir / "report.json";
    detail::write_text_file(path, report_to_json(report).dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

}  // namespace bipv
