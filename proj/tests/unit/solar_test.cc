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

#include "bipv/solar.hpp"

#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "bipv/error.hpp"

namespace bipv {
namespace {

constexpr double kDeg = 3.14159265358979323846 / 180.0;

std::int64_t utc(const char* iso) { return parse_timestamp(iso).utc_seconds; }

TEST(TimestampTest, ParseAndFormat) {
  const Timestamp t = parse_timestamp("2022-06-21T12:30:00+08:00");
  EXPECT_EQ(t.offset_minutes, 480);
  EXPECT_EQ(t.utc_seconds, utc("2022-06-21T04:30:00Z"));
  EXPECT_EQ(format_timestamp(t), "2022-06-21T12:30:00+08:00");
  EXPECT_EQ(local_year(parse_timestamp("2022-01-01T00:00:00+08:00")), 2022);
  EXPECT_THROW(parse_timestamp("2022-06-21T12:30:00"), ValidationError);
  EXPECT_THROW(parse_timestamp("2022-13-01T00:00Z"), ValidationError);
}

TEST(SolarPositionTest, EquinoxNoonAtEquator) {
  const SolarPosition s = solar_position(utc("2022-03-20T12:07:00Z"), 0.0, 0.0);
  EXPECT_LE(s.zenith_deg, 1.0);
}

TEST(SolarPositionTest, JuneSolsticeDeclination) {
  const SolarPosition s = solar_position(utc("2022-06-21T12:00:00Z"), 36.8, 118.05);
  EXPECT_NEAR(s.declination_deg, 23.45, 0.5);
  const SolarPosition w = solar_position(utc("2022-12-21T12:00:00Z"), 36.8, 118.05);
  EXPECT_NEAR(w.declination_deg, -23.45, 0.5);
}

TEST(SolarPositionTest, LocalMidnightIsDark) {
  // 00:00 at UTC+8 near 118 E.
  const SolarPosition s = solar_position(utc("2022-06-21T00:00:00+08:00"), 36.8, 118.05);
  EXPECT_GT(s.zenith_deg, 90.0);
}

TEST(SolarPositionTest, NoonSunIsSouthAtMidLatitude) {
  const SolarPosition s = solar_position(utc("2022-06-21T12:00:00+08:00"), 36.8, 118.05);
  EXPECT_NEAR(s.azimuth_deg, 180.0, 15.0);
  // Zenith at solar noon on the solstice is latitude minus declination.
  EXPECT_NEAR(s.zenith_deg, 36.8 - 23.44, 1.5);
}

WeatherRecord record(double ghi, double dni, double dhi, double temp = 25.0) {
  WeatherRecord r;
  r.ghi = ghi;
  r.dni = dni;
  r.dhi = dhi;
  r.temp_air = temp;
  return r;
}

TEST(PoaTest, HandComputedVerticalSurface) {
  SolarPosition sun;
  sun.zenith_deg = 60.0;
  sun.azimuth_deg = 135.0;
  const PoaComponents p =
      poa_components(record(500, 800, 100), sun, Orientation{90.0, 135.0}, 0.2);
  EXPECT_NEAR(p.beam, 800 * std::sin(60 * kDeg), 1e-9);
  EXPECT_NEAR(p.sky_diffuse, 50.0, 1e-9);
  EXPECT_NEAR(p.ground, 50.0, 1e-9);
  EXPECT_NEAR(p.total(), 792.8, 0.05);
}

TEST(PoaTest, SunBehindSurfaceHasNoBeam) {
  SolarPosition sun;
  sun.zenith_deg = 40.0;
  sun.azimuth_deg = 0.0;
  EXPECT_EQ(poa_components(record(700, 800, 100), sun, Orientation{90.0, 180.0}).beam, 0.0);
}

TEST(PoaTest, HorizontalEqualsGhiAcrossASyntheticYear) {
  const WeatherSeries s = synthetic_weather(2022, 36.8, 118.05, 8, 7);
  ASSERT_EQ(s.records.size(), 8760u);
  double worst = 0.0;
  for (const auto& r : s.records) {
    const SolarPosition sun = solar_position(r.time.utc_seconds, 36.8, 118.05);
    worst = std::max(worst, std::abs(poa_irradiance(r, sun, Orientation{0.0, 180.0}) - r.ghi));
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(CellTemperatureTest, Noct) {
  EXPECT_DOUBLE_EQ(cell_temperature(800, 20, 45), 45.0);
  EXPECT_DOUBLE_EQ(cell_temperature(0, 13.5, 45), 13.5);
  EXPECT_DOUBLE_EQ(cell_temperature(400, 25, 45), 37.5);
  EXPECT_THROW(cell_temperature(-1, 25, 45), InvalidParameter);
}

TEST(DcPowerTest, ReferencePoints) {
  const PanelSpec p;
  EXPECT_DOUBLE_EQ(dc_power(1000, 25, p, -0.0035, 1.0), p.rated_power_w);
  EXPECT_DOUBLE_EQ(dc_power(0, 25, p, -0.0035, 1.0), 0.0);
  EXPECT_NEAR(dc_power(1000, 50, p, -0.0035, 1.0), 469.45 * 0.9125, 1e-9);
  EXPECT_NEAR(dc_power(1000, 50, p, -0.0035, 1.0), 428.37, 0.005);
  // Extreme heat cannot produce negative power.
  EXPECT_EQ(dc_power(1000, 400, p, -0.0035, 1.0), 0.0);
}

TEST(DcPowerTest, Monotonicity) {
  const PanelSpec p;
  for (double t = -20; t <= 80; t += 10) {
    double prev = -1.0;
    for (double poa = 0; poa <= 1200; poa += 50) {
      const double w = dc_power(poa, t, p, -0.0035, 0.86);
      EXPECT_GE(w, prev);
      prev = w;
    }
  }
  for (double poa = 0; poa <= 1200; poa += 100) {
    double prev = 1e9;
    for (double t = -20; t <= 80; t += 5) {
      const double w = dc_power(poa, t, p, -0.0035, 0.86);
      EXPECT_LE(w, prev);
      prev = w;
    }
  }
}

WeatherSeries constant_series(double ghi, double temp) {
  WeatherSeries s;
  const std::int64_t start = utc("2022-01-01T00:00:00+08:00");
  for (int h = 0; h < 8760; ++h) {
    WeatherRecord r = record(ghi, 0.0, ghi, temp);
    r.time = Timestamp{start + 3600 * h, 480};
    s.records.push_back(r);
  }
  return s;
}

SurfaceConfig horizontal(const PvModelParams& params = {}) {
  return SurfaceConfig{Cell{}, {{Orientation{0.0, 180.0}, 1.0}}, params};
}

TEST(AnnualYieldTest, DarkSeriesYieldsNothing) {
  const YieldResult r = annual_yield(constant_series(0, 10), horizontal(), PanelSpec{}, 36.8, 118.05);
  EXPECT_EQ(r.kwh_per_panel_yr, 0.0);
}

TEST(AnnualYieldTest, ConstantPoaClosedForm) {
  const PanelSpec panel;
  const PvModelParams params;
  const double poa = 600.0;
  const double t_cell = cell_temperature(poa, 15.0, params.noct_c);
  const double watts = dc_power(poa, t_cell, panel, params.gamma_per_c, params.system_derate);
  const YieldResult r =
      annual_yield(constant_series(poa, 15.0), horizontal(params), panel, 36.8, 118.05);
  const double expected = watts * 8760.0 / 1000.0;
  EXPECT_NEAR(r.kwh_per_panel_yr / expected, 1.0, 1e-6);
  EXPECT_NEAR(r.kwh_per_kwp_yr, r.kwh_per_panel_yr / (panel.rated_power_w / 1000.0), 1e-9);
}

TEST(AnnualYieldTest, GapsAreFilledOrRejected) {
  WeatherSeries s = constant_series(100, 15);
  s.records.erase(s.records.begin() + 100, s.records.begin() + 103);  // 3-step gap
  const YieldResult r = annual_yield(s, horizontal(), PanelSpec{}, 36.8, 118.05);
  EXPECT_EQ(r.filled_gap_steps, 3);
  EXPECT_EQ(r.warnings.size(), 1u);
  s.records.erase(s.records.begin() + 200, s.records.begin() + 204);  // 4-step gap
  EXPECT_THROW(annual_yield(s, horizontal(), PanelSpec{}, 36.8, 118.05), ValidationError);
}

TEST(AnnualYieldTest, PartialYearRequiresOptIn) {
  WeatherSeries s = constant_series(100, 15);
  s.records.resize(24 * 30);
  EXPECT_THROW(annual_yield(s, horizontal(), PanelSpec{}, 36.8, 118.05), ValidationError);
  YieldOptions o;
  o.require_full_year = false;
  EXPECT_GT(annual_yield(s, horizontal(), PanelSpec{}, 36.8, 118.05, o).kwh_per_panel_yr, 0.0);
}

class SampleYearTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { series_ = new WeatherSeries(synthetic_weather(2022, 36.8, 118.05, 8, 2022)); }
  static void TearDownTestSuite() { delete series_; }
  static WeatherSeries* series_;
};
WeatherSeries* SampleYearTest::series_ = nullptr;

TEST_F(SampleYearTest, EnergyIsBoundedByContinuousRatedOutput) {
  for (const Cell& cell : all_cells()) {
    const YieldResult r = annual_yield(*series_, default_surface_config(cell, 36.8), PanelSpec{},
                                       36.8, 118.05);
    EXPECT_GT(r.kwh_per_kwp_yr, 0.0);
    EXPECT_LE(r.kwh_per_kwp_yr, 8760.0 * 0.86);
  }
}

TEST_F(SampleYearTest, VerticalYieldsDoNotExceedRooftop) {
  const PanelSpec panel;
  for (BuildingCategory c : kAllCategories) {
    const double roof = annual_yield(*series_, default_surface_config({c, BipvType::kRooftop}, 36.8),
                                     panel, 36.8, 118.05).kwh_per_panel_yr;
    for (BipvType t : {BipvType::kFacade, BipvType::kWindow}) {
      const double v = annual_yield(*series_, default_surface_config({c, t}, 36.8), panel, 36.8,
                                    118.05).kwh_per_panel_yr;
      EXPECT_LE(v, roof);
      EXPECT_GE(v / roof, 0.50);
      EXPECT_LE(v / roof, 0.85);
    }
  }
}

TEST_F(SampleYearTest, OrientationWeightsAreLinear) {
  const PanelSpec panel;
  const Orientation east{90.0, 90.0}, south{90.0, 180.0}, roof{30.0, 200.0};
  auto single = [&](Orientation o) {
    return annual_yield(*series_, SurfaceConfig{Cell{}, {{o, 1.0}}, {}}, panel, 36.8, 118.05)
        .kwh_per_panel_yr;
  };
  const SurfaceConfig mix{Cell{}, {{east, 0.25}, {south, 0.5}, {roof, 0.25}}, {}};
  const double mixed = annual_yield(*series_, mix, panel, 36.8, 118.05).kwh_per_panel_yr;
  EXPECT_DOUBLE_EQ(mixed, 0.25 * single(east) + 0.5 * single(south) + 0.25 * single(roof));
}

TEST(SurfaceConfigTest, Defaults) {
  const SurfaceConfig roof = default_surface_config({BuildingCategory::kHouse, BipvType::kRooftop}, 36.8);
  ASSERT_EQ(roof.orientations.size(), 1u);
  EXPECT_DOUBLE_EQ(roof.orientations[0].orientation.tilt_deg, 36.8);
  EXPECT_DOUBLE_EQ(roof.orientations[0].orientation.azimuth_deg, 180.0);
  const SurfaceConfig south = default_surface_config({BuildingCategory::kHouse, BipvType::kWindow}, -33.9);
  EXPECT_DOUBLE_EQ(south.orientations[0].orientation.tilt_deg, 90.0);
  EXPECT_DOUBLE_EQ(south.orientations[0].orientation.azimuth_deg, 0.0);
  SurfaceConfig bad = roof;
  bad.orientations[0].weight = 0.7;
  EXPECT_THROW(validate_surface(bad), ValidationError);
}

TEST(WeatherCsvTest, ParsesAndRejects) {
  const std::string head = std::string(kWeatherCsvHeader) + "\n";
  const WeatherSeries s = parse_weather_csv(
      head + "2022-01-01T00:00+08:00,0,0,0,1.5,2\n2022-01-01T01:00+08:00,10,0,10,1.5,2\n");
  ASSERT_EQ(s.records.size(), 2u);
  EXPECT_EQ(s.step_seconds(), 3600);
  try {
    parse_weather_csv(head + "2022-01-01T00:00+08:00,0,0,0,1,2\n2022-01-01T01:00+08:00,-5,0,0,1,2\n",
                      "w.csv");
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("w.csv:3"), std::string::npos);
  }
  EXPECT_THROW(parse_weather_csv(head + "2022-01-01T00:00+08:00,0,0,0,1,2\n"
                                        "2022-01-01T00:00+08:00,0,0,0,1,2\n"),
               ValidationError);
}

TEST(WeatherCsvTest, FullYearRoundTrip) {
  const WeatherSeries s = synthetic_weather(2021, 36.8, 118.05, 8, 1);
  const WeatherSeries back = parse_weather_csv(weather_csv(s));
  ASSERT_EQ(back.records.size(), 8760u);
  EXPECT_EQ(back.records.front().time, s.records.front().time);
  EXPECT_EQ(weather_csv(back), weather_csv(s));
}

TEST(SyntheticWeatherTest, DeterministicPerSeed) {
  EXPECT_EQ(synthetic_weather(2022, 36.8, 118.05, 8, 5), synthetic_weather(2022, 36.8, 118.05, 8, 5));
  EXPECT_NE(synthetic_weather(2022, 36.8, 118.05, 8, 5), synthetic_weather(2022, 36.8, 118.05, 8, 6));
}

TEST(SampleFileTest, ShippedSampleMatchesGenerator) {
  // The shipped file is the generator's output written with fixed precision.
  const WeatherSeries s = load_weather(std::filesystem::path(BIPV_TEST_DATA_DIR) / "sample_tmy_zibo.csv");
  EXPECT_EQ(s.records.size(), 8760u);
  EXPECT_EQ(weather_csv(s), weather_csv(synthetic_weather(2022, 36.8, 118.05, 8, 2022)));
}

}  // namespace
}  // namespace bipv
