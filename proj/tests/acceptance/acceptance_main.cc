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

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "bipv/area.hpp"
#include "bipv/bipv.hpp"
#include "bipv/econ.hpp"
#include "bipv/mask.hpp"
#include "bipv/metrics.hpp"
#include "bipv/pipeline.hpp"
#include "bipv/solar.hpp"
#include "test_support.h"

namespace bipv {
namespace {

using C = BuildingCategory;
using T = BipvType;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

// Zibo reference rooftop areas (m2) per category.
CategoryAreas reference_areas() {
  CategoryAreas a;
  a[C::kApartment] = 56194238;
  a[C::kHouse] = 32877425;
  a[C::kCenterBuilding] = 44583152;
  a[C::kFactory] = 82321505;
  a[C::kHighRiseBuilding] = 9843321;
  a[C::kOthers] = 86554648;
  return a;
}

// Zibo reference panel counts, rooftop/facade/window per category.
constexpr std::int64_t kReferencePanels[6][3] = {
    {15512043, 49767805, 465361}, {10588191, 6352915, 326721},
    {13332454, 12922224, 615343}, {30299067, 19694393, 181794},
    {2264319, 13151164, 285304},  {15928554, 6570528, 238928},
};

// Zibo reference carbon reductions, 1e7 t CO2.
constexpr double kReferenceCer[6][3] = {
    {0.6366, 1.2254, 0.0116}, {0.4342, 0.2605, 0.0096}, {0.547, 0.4773, 0.0171},
    {1.2431, 0.8889, 0.0075}, {0.093, 0.2968, 0.0062},  {0.6537, 0.2694, 0.0068},
};

Outcome panel_counts() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const InstallPlan plan =
      build_install_plan(reference_areas(), BipvFactors::defaults(), PanelSpec{});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  int worst = 0;
  for (const Cell& c : all_cells()) {
    const std::int64_t want = kReferencePanels[category_index(c.category)][bipv_index(c.type)];
    const auto diff = std::llabs(plan[c].panel_count - want);
    worst = std::max(worst, static_cast<int>(diff));
    o.require(diff <= 1, fmt::format("{}: {} vs {}", cell_label(c), plan[c].panel_count, want));
  }
  o.require(plan[(Cell{C::kApartment, T::kRooftop})].panel_count == 15512043, "apartment rooftop");
  o.require(plan[(Cell{C::kApartment, T::kWindow})].panel_count == 465361, "apartment window");
  o.require(plan[(Cell{C::kFactory, T::kRooftop})].panel_count == 30299067, "factory rooftop");
  o.require(secs < 1.0, fmt::format("took {:.3f} s", secs));
  if (o.pass) o.detail = fmt::format("max diff {} panel(s), {:.2e} s", worst, secs);
  return o;
}

Outcome cer_cross_check() {
  Outcome o;
  const EmissionFactor ef;
  struct Case {
    double twh;
    Cell cell;
  };
  const Case cases[] = {{18.18, {C::kFactory, T::kRooftop}},
                        {9.31, {C::kApartment, T::kRooftop}},
                        {17.92, {C::kApartment, T::kFacade}},
                        {4.34, {C::kHighRiseBuilding, T::kFacade}}};
  double worst = 0.0;
  for (const Case& k : cases) {
    const double got = cer(k.twh * 1e9, ef) / 1000.0 / 1e7;
    const double want = kReferenceCer[category_index(k.cell.category)][bipv_index(k.cell.type)];
    const double rel = std::abs(got - want) / want;
    worst = std::max(worst, rel);
    o.require(rel <= 5e-4, fmt::format("{}: {:.5f} vs {}", cell_label(k.cell), got, want));
  }
  if (o.pass) o.detail = fmt::format("max rel err {:.2e}", worst);
  return o;
}

Outcome cer_total() {
  Outcome o;
  double total = 0.0;
  for (const auto& row : kReferenceCer) {
    for (double v : row) total += v * 1e7;
  }
  o.require(std::abs(total - 7.0847e7) <= 1e3, fmt::format("sum {:.0f} t", total));
  if (o.pass) o.detail = fmt::format("sum {:.0f} t", total);
  return o;
}

Outcome self_sufficiency_ratio() {
  Outcome o;
  const double r = self_sufficiency(103.59, 41.63);
  o.require(std::abs(r - 2.488) <= 0.005, fmt::format("ratio {:.4f}", r));
  if (o.pass) o.detail = fmt::format("ratio {:.4f}", r);
  return o;
}

Outcome metrics_oracle() {
  Outcome o;
  std::mt19937 rng(2024);
  for (int i = 0; i < 200 && o.pass; ++i) {
    const Bitmap p = testing::random_bitmap(rng, 16, 16);
    const Bitmap t = testing::random_bitmap(rng, 16, 16);
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t k = 0; k < p.bits.size(); ++k) {
      const bool a = p.bits[k] != 0, b = t.bits[k] != 0;
      tp += a && b;
      tn += !a && !b;
      fp += a && !b;
      fn += !a && b;
    }
    const ConfusionCounts c = confusion(rle_encode(p), rle_encode(t));
    const double pa = static_cast<double>(tp + tn) / static_cast<double>(tp + tn + fp + fn);
    const double iou_ref =
        tp + fp + fn == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp + fn);
    o.require(pixel_accuracy(c) == pa, fmt::format("PA mismatch on pair {}", i));
    o.require(iou(c).value == iou_ref, fmt::format("IoU mismatch on pair {}", i));
  }
  std::uniform_int_distribution<int> dim(1, 64);
  for (int i = 0; i < 1000 && o.pass; ++i) {
    const int w = dim(rng), h = dim(rng);
    const Bitmap b = testing::random_bitmap(rng, w, h);
    const Bitmap back = rle_decode(rle_encode(b));
    o.require(back.width == b.width && back.height == b.height && back.bits == b.bits,
              fmt::format("round trip failed on {}x{} grid {}", w, h, i));
  }
  if (o.pass) o.detail = "200 pairs, 1000 grids";
  return o;
}

Outcome others_oracle() {
  Outcome o;
  std::mt19937 rng(404);
  std::uniform_int_distribution<int> label(0, 7);
  for (int i = 0; i < 100 && o.pass; ++i) {
    const int w = 5 + i % 30, h = 3 + i % 17;
    Bitmap all{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 0)};
    std::vector<Bitmap> cats(5, all);
    for (std::size_t k = 0; k < all.bits.size(); ++k) {
      const int l = label(rng);
      if (l == 0) continue;
      all.bits[k] = 1;
      if (l <= 5) cats[static_cast<std::size_t>(l - 1)].bits[k] = 1;
    }
    TilePrediction pred{"t", {{std::nullopt, 0.9, rle_encode(all), std::nullopt}}};
    for (int c = 0; c < 5; ++c) {
      pred.instances.push_back({static_cast<C>(c + 1), 0.9,
                                rle_encode(cats[static_cast<std::size_t>(c)]), std::nullopt});
    }
    const TileMeta meta{"t", w, h, 100, 1000, std::nullopt, std::nullopt};
    const TilePixels px = tile_pixels(pred, meta, ThresholdSet::uniform(0.25));
    std::int64_t rest = 0;
    for (std::size_t k = 0; k < all.bits.size(); ++k) {
      bool in = all.bits[k] != 0;
      for (const auto& c : cats) in = in && c.bits[k] == 0;
      rest += in;
    }
    const OthersArea oa = others_area(px.all_buildings_px, px.category_px, meta.pixel_area_m2());
    o.require(px.others_px == rest && !px.overlap_warning &&
                  oa.area_m2 == category_area(rest, meta.pixel_area_m2()),
              fmt::format("tile {}: {} vs {}", i, px.others_px, rest));
  }

  const RleMask block = rle_encode(testing::rect_bitmap(4, 4, 0, 0, 2, 2));
  const TilePrediction over{"t",
                            {{std::nullopt, 0.9, block, std::nullopt},
                             {C::kHouse, 0.9, block, std::nullopt},
                             {C::kFactory, 0.9, block, std::nullopt}}};
  const TileMeta meta{"t", 4, 4, 100, 1000, std::nullopt, std::nullopt};
  const DatasetManifest m{"m", false, {meta}};
  const std::vector<TilePrediction> preds{over};
  const AreaSummary s = aggregate_areas(preds, m, ThresholdSet::uniform(0.25));
  o.require(s.overlap_warnings == 1 && s.areas[C::kOthers] == 0.0, "overlap did not clamp");
  if (o.pass) o.detail = "100 tiles exact, clamp warns";
  return o;
}

Outcome sweep_argmax() {
  Outcome o;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_int_distribution<int> code(0, 6);
  std::vector<GroundTruthMap> truth;
  std::vector<TilePrediction> preds;
  for (int t = 0; t < 6; ++t) {
    const std::string id = "tile" + std::to_string(t);
    std::vector<std::uint8_t> labels(12 * 12);
    for (auto& l : labels) l = static_cast<std::uint8_t>(code(rng) % 3 == 0 ? code(rng) : 0);
    truth.push_back(GroundTruthMap::from_labels(id, 12, 12, labels));
    TilePrediction p{id, {}};
    for (int k = 0; k < 12; ++k) {
      const int c = code(rng);
      std::optional<C> cat;
      if (c >= 1 && c <= 5) cat = static_cast<C>(c);
      p.instances.push_back(
          {cat, score(rng), rle_encode(testing::random_bitmap(rng, 12, 12)), std::nullopt});
    }
    preds.push_back(std::move(p));
  }
  const GroundTruthIndex index(truth);
  const std::vector<double> grid = default_threshold_grid();
  int sweeps = 0;
  for (C c : kAllCategories) {
    for (Objective obj : {Objective::kPixelAccuracy, Objective::kIou}) {
      const SweepResult r = threshold_sweep(preds, index, c, grid, obj);
      double best_value = -1.0, best_t = 0.0;
      for (double t : grid) {
        const CategoryMetrics m = evaluate_category(preds, index, c, t);
        const double v = obj == Objective::kIou ? m.iou : m.pa;
        if (v > best_value) {
          best_value = v;
          best_t = t;
        }
      }
      o.require(r.best_threshold == best_t,
                fmt::format("{} {}: {} vs {}", category_key(c), objective_name(obj),
                            r.best_threshold, best_t));
      for (std::size_t i = 1; i < r.grid.size(); ++i) {
        o.require(r.grid[i].instance_count <= r.grid[i - 1].instance_count,
                  fmt::format("{}: instance count rises at {}", category_key(c), grid[i]));
      }
      ++sweeps;
    }
  }
  if (o.pass) o.detail = fmt::format("{} sweeps", sweeps);
  return o;
}

Outcome solar_model() {
  Outcome o;
  const PanelSpec panel;
  const PvModelParams params;
  o.require(dc_power(1000.0, 25.0, panel, params.gamma_per_c, 1.0) == panel.rated_power_w,
            "STC power differs from rating");

  const WeatherSeries syn = synthetic_weather(2022, 36.8, 118.05, 8, 7);
  double worst = 0.0;
  for (const auto& r : syn.records) {
    const SolarPosition sun = solar_position(r.time.utc_seconds, 36.8, 118.05);
    worst = std::max(worst, std::abs(poa_irradiance(r, sun, Orientation{0.0, 180.0}) - r.ghi));
  }
  o.require(syn.records.size() == 8760 && worst <= 1e-9,
            fmt::format("tilt-0 POA off GHI by {}", worst));

  const double decl =
      solar_position(parse_timestamp("2022-06-21T12:00:00Z").utc_seconds, 36.8, 118.05)
          .declination_deg;
  o.require(std::abs(decl - 23.45) <= 0.5, fmt::format("declination {}", decl));

  WeatherSeries flat;
  const std::int64_t start = parse_timestamp("2022-01-01T00:00:00+08:00").utc_seconds;
  for (int h = 0; h < 8760; ++h) {
    WeatherRecord r;
    r.time = Timestamp{start + 3600 * h, 480};
    r.ghi = r.dhi = 600.0;
    r.temp_air = 15.0;
    flat.records.push_back(r);
  }
  const SurfaceConfig horizontal{Cell{}, {{Orientation{0.0, 180.0}, 1.0}}, params};
  const double watts = dc_power(600.0, cell_temperature(600.0, 15.0, params.noct_c), panel,
                                params.gamma_per_c, params.system_derate);
  const double got = annual_yield(flat, horizontal, panel, 36.8, 118.05).kwh_per_panel_yr;
  o.require(std::abs(got / (watts * 8.76) - 1.0) <= 1e-6, "constant POA energy");

  const WeatherSeries tmy = load_weather(testing::data_dir() / "sample_tmy_zibo.csv");
  auto yield = [&](Orientation orient) {
    return annual_yield(tmy, SurfaceConfig{Cell{}, {{orient, 1.0}}, params}, panel, 36.8, 118.05)
        .kwh_per_panel_yr;
  };
  const double ratio = yield({90.0, 180.0}) / yield({36.8, 180.0});
  o.require(ratio >= 0.50 && ratio <= 0.85, fmt::format("vertical ratio {:.3f}", ratio));
  if (o.pass) o.detail = fmt::format("vertical/latitude-tilt {:.3f}", ratio);
  return o;
}

Outcome lcoe_checks() {
  Outcome o;
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int i = 0; i < 50 && o.pass; ++i) {
    const CostModel cm{u(rng), u(rng) / 10, u(rng) / 10};
    const double capacity = u(rng) * 1000;
    GenerationSeries s;
    double total_e = 0.0, total_c = 0.0;
    for (int t = 1; t <= 20; ++t) {
      s.e_t.push_back(u(rng) * 1000);
      total_e += s.e_t.back();
      total_c += annual_cost(cm, t);
    }
    const double got = lcoe(cm, capacity, s, LcoeParams{0.0, 20, 0.0});
    const double want = capacity * total_c / total_e;
    o.require(std::abs(got - want) <= 4 * std::numeric_limits<double>::epsilon() * want,
              fmt::format("r=0 case {}: {} vs {}", i, got, want));
  }
  const double annuity = lcoe(CostModel{1.0, 0.0, 0.0}, 1.0, generation_series(1.0, 0.0, 25),
                              LcoeParams{0.05, 25, 0.0});
  o.require(std::abs(annuity - 0.067574) <= 1e-6, fmt::format("annuity {:.7f}", annuity));

  const LcoeParams p;
  const CostModel cm{3.0, 0.02, 0.01};
  const GenerationSeries s = generation_series(600.0, p.degradation_per_yr, p.horizon_years);
  const double base = lcoe(cm, 1000.0, s, p);
  for (double k : {0.01, 2.0, 1e4}) {
    GenerationSeries scaled = s;
    for (double& e : scaled.e_t) e *= k;
    o.require(std::abs(lcoe(cm, 1000.0 * k, scaled, p) / base - 1.0) <= 1e-12,
              fmt::format("scale {} changes LCOE", k));
  }
  if (o.pass) o.detail = fmt::format("annuity {:.6f}", annuity);
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto dir = testing::scratch_fixture("acceptance");
  std::ostringstream out, err;
  const Console console{out, err};
  int rc = 0;
  for (const auto& [name, jobs] : {std::pair{"a", 1}, std::pair{"b", 1}, std::pair{"c", 4}}) {
    RunOptions opts;
    opts.out_dir = dir / name;
    opts.jobs = jobs;
    rc |= cmd_assess(dir / "config.json", opts, console);
  }
  o.require(rc == 0, "assess failed: " + err.str());
  if (o.pass) {
    const auto a = testing::dir_contents(dir / "a");
    o.require(a.size() == 7, fmt::format("{} files", a.size()));
    o.require(a == testing::dir_contents(dir / "b"), "two runs differ");
    o.require(a == testing::dir_contents(dir / "c"), "jobs 1 and 4 differ");
    if (o.pass) o.detail = fmt::format("{} files identical", a.size());
  }
  std::filesystem::remove_all(dir);
  return o;
}

}  // namespace
}  // namespace bipv

int main() {
  using bipv::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"panel counts from published areas", bipv::panel_counts},
      {"CER from published energies", bipv::cer_cross_check},
      {"CER grand total", bipv::cer_total},
      {"self-sufficiency ratio", bipv::self_sufficiency_ratio},
      {"PA/IoU and RLE oracle", bipv::metrics_oracle},
      {"Others set-difference oracle", bipv::others_oracle},
      {"threshold sweep argmax", bipv::sweep_argmax},
      {"solar model", bipv::solar_model},
      {"LCOE", bipv::lcoe_checks},
      {"determinism", bipv::determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name;
    if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
    std::cout << '\n';
    failed += !o.pass;
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
