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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"
#include "test_support.h"

namespace bipv {
namespace {

namespace fs = std::filesystem;
using C = BuildingCategory;
using T = BipvType;
using testing::slurp;

// Identity factors and areas sized so every cell holds exactly `n` panels.
ReportInputs uniform_inputs(std::int64_t n, double kwh_per_panel, std::vector<int> years) {
  ReportInputs in;
  const PanelSpec panel;
  for (BuildingCategory c : kAllCategories) {
    in.areas.areas[c] = (static_cast<double>(n) + 0.5) * panel.footprint_m2();
  }
  for (const Cell& cell : all_cells()) in.factors.set(cell, {1.0, 1.0});
  for (int y : years) {
    in.yields[y].fill(kwh_per_panel);
    in.consumption_kwh[y] = 1e6;
  }
  return in;
}

TEST(BuildReportTest, SingleCellSingleYear) {
  ReportInputs in = uniform_inputs(40, 600.0, {2022});
  const AssessmentReport r = build_report(in);
  ASSERT_EQ(r.energy.size(), 18u);
  for (const auto& e : r.energy) {
    EXPECT_EQ(e.year, 2022);
    EXPECT_DOUBLE_EQ(e.kwh, 40 * 600.0);
  }
  ASSERT_EQ(r.self_sufficiency.size(), 1u);
  EXPECT_DOUBLE_EQ(r.self_sufficiency[0].generation_kwh, 18 * 40 * 600.0);
}

TEST(BuildReportTest, CerIsEnergyTimesFactorPerCell) {
  ReportInputs in = uniform_inputs(13, 577.25, {2021, 2022});
  in.yields[2022][(Cell{C::kHouse, T::kFacade}.index())] = 401.5;
  const AssessmentReport r = build_report(in);
  ASSERT_EQ(r.cer.size(), r.energy.size());
  double total = 0.0;
  for (std::size_t i = 0; i < r.cer.size(); ++i) {
    EXPECT_EQ(r.cer[i].cell, r.energy[i].cell);
    EXPECT_EQ(r.cer[i].kwh, r.energy[i].kwh);
    EXPECT_EQ(r.cer[i].cer_kg, r.energy[i].kwh * 0.6838);
    total += r.cer[i].cer_kg;
  }
  EXPECT_DOUBLE_EQ(r.total_cer_kg(), total);
  EXPECT_EQ(r.lcoe.size(), 18u);
}

TEST(BuildReportTest, ReferenceEnergiesGiveReferenceCer) {
  // 17.92 TWh from one cell, spread over a single panel for simplicity.
  ReportInputs in = uniform_inputs(1, 0.0, {2022});
  in.yields[2022][(Cell{C::kApartment, T::kFacade}.index())] = 17.92e9;
  const AssessmentReport r = build_report(in);
  for (const auto& c : r.cer) {
    if (c.cell == Cell{C::kApartment, T::kFacade}) {
      EXPECT_NEAR(c.cer_t() / 1e7, 1.2254, 1.2254 * 5e-4);
    }
  }
}

TEST(BuildReportTest, ZeroYieldsLeaveLcoeUndefined) {
  const AssessmentReport r = build_report(uniform_inputs(5, 0.0, {2022}));
  for (const auto& e : r.energy) EXPECT_EQ(e.kwh, 0.0);
  for (const auto& c : r.cer) EXPECT_EQ(c.cer_kg, 0.0);
  for (const auto& l : r.lcoe) {
    EXPECT_EQ(l.status, LcoeStatus::kUndefined) << cell_label(l.cell);
    EXPECT_FALSE(l.cny_per_kwh.has_value());
  }
}

TEST(BuildReportTest, NoPanelsMeansNoCapacity) {
  const AssessmentReport r = build_report(uniform_inputs(0, 600.0, {2022}));
  for (const auto& l : r.lcoe) EXPECT_EQ(l.status, LcoeStatus::kNoCapacity);
}

TEST(BuildReportTest, MissingConsumptionYearIsNamed) {
  ReportInputs in = uniform_inputs(3, 600.0, {2021, 2022});
  in.consumption_kwh.erase(2021);
  try {
    build_report(in);
    FAIL() << "expected MissingInputError";
  } catch (const MissingInputError& e) {
    EXPECT_NE(std::string(e.what()).find("2021"), std::string::npos);
  }
}

TEST(BuildReportTest, MissingFactorCellIsConfigurationError) {
  ReportInputs in = uniform_inputs(3, 600.0, {2022});
  in.factors.clear(Cell{C::kOthers, T::kWindow});
  EXPECT_THROW(build_report(in), ValidationError);
}

TEST(SelfSufficiencyTest, Examples) {
  EXPECT_NEAR(self_sufficiency(103.59, 41.63), 2.488, 0.005);
  EXPECT_DOUBLE_EQ(self_sufficiency(7.0, 7.0), 1.0);
  EXPECT_NEAR(self_sufficiency(100e9, 32.84e9), 3.045, 5e-4);
  EXPECT_THROW(self_sufficiency(1.0, 0.0), ValidationError);
  EXPECT_THROW(self_sufficiency(1.0, -3.0), ValidationError);
}

TEST(SelfSufficiencyTest, ScaleInvariant) {
  for (double k : {0.001, 0.5, 3.0, 1e6}) {
    EXPECT_NEAR(self_sufficiency(103.59 * k, 41.63 * k), self_sufficiency(103.59, 41.63), 1e-12);
  }
}

TEST(ConsumptionCsvTest, ParseAndErrors) {
  const auto m = parse_consumption_csv("year,kwh\n2013,32.84e9\n2022,41.63e9\n");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.at(2013), 32.84e9);
  EXPECT_THROW(parse_consumption_csv("year,kwh\n2013,-1\n"), ValidationError);
  EXPECT_THROW(parse_consumption_csv(""), SchemaError);
}

class EmitTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bipv_emit_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(EmitTest, SameReportTwiceIsByteIdentical) {
  AssessmentReport r = build_report(uniform_inputs(21, 612.5, {2021, 2022}));
  r.tool_version = "test";
  emit(r, EmitFormat::kBoth, dir_ / "a");
  emit(r, EmitFormat::kBoth, dir_ / "b");
  int files = 0;
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const auto name = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / name)) << name;
    ++files;
  }
  EXPECT_EQ(files, 7);
}

TEST_F(EmitTest, EmptyReportGivesHeaderOnlyFiles) {
  const auto written = emit(AssessmentReport{}, EmitFormat::kCsv, dir_);
  ASSERT_EQ(written.size(), 6u);
  for (const auto& p : written) {
    const std::string text = slurp(p);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1) << p;
  }
}

TEST(ReportJsonTest, RoundTrip) {
  AssessmentReport r = build_report(uniform_inputs(9, 587.123456789, {2021, 2022}));
  r.config = {{"note", "x"}, {"years", {2021, 2022}}};
  r.tool_version = "1.2.3";
  r.lcoe[0].cny_per_kwh.reset();
  r.lcoe[0].status = LcoeStatus::kNoCapacity;
  const AssessmentReport back = report_from_json(nlohmann::json::parse(report_to_json(r).dump()));
  EXPECT_EQ(back, r);
}

}  // namespace
}  // namespace bipv
