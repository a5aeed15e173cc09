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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bipv/bipv.hpp"

namespace bipv {

// Instant in time with the UTC offset it was written with.
struct Timestamp {
  std::int64_t utc_seconds = 0;
  int offset_minutes = 0;

  auto operator<=>(const Timestamp&) const = default;
};

// ISO-8601 "YYYY-MM-DDTHH:MM[:SS](Z|+HH:MM|-HH:MM)". An offset is required.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(const Timestamp& ts);
// Calendar year in the timestamp's own offset.
int local_year(const Timestamp& ts);

struct WeatherRecord {
  Timestamp time;
  double ghi = 0.0;  // W/m2
  double dni = 0.0;
  double dhi = 0.0;
  double temp_air = 0.0;    // degC
  double wind_speed = 0.0;  // m/s

  bool operator==(const WeatherRecord&) const = default;
};

struct WeatherSeries {
  std::vector<WeatherRecord> records;

  // Spacing of the first two records, in seconds (0 for fewer than two).
  std::int64_t step_seconds() const;
  bool operator==(const WeatherSeries&) const = default;
};

inline constexpr std::string_view kWeatherCsvHeader =
    "timestamp,ghi,dni,dhi,temp_air,wind_speed";

// Throws ValidationError citing the 1-based line for malformed rows, negative
// irradiance, or non-increasing timestamps.
WeatherSeries parse_weather_csv(std::string_view text, std::string_view source = "<memory>");
WeatherSeries load_weather(const std::filesystem::path& path);
std::string weather_csv(const WeatherSeries& series);

struct SolarPosition {
  double zenith_deg = 0.0;
  double azimuth_deg = 0.0;  // clockwise from north
  double declination_deg = 0.0;
  double equation_of_time_min = 0.0;
};

// Low-precision solar position (Spencer series for declination and equation
// of time, as used by the NOAA spreadsheet). Good to ~0.5 degrees.
SolarPosition solar_position(std::int64_t utc_seconds, double latitude_deg,
                             double longitude_deg);

struct Orientation {
  double tilt_deg = 0.0;      // 0 horizontal, 90 vertical
  double azimuth_deg = 180.0;  // direction the surface faces, clockwise from north

  bool operator==(const Orientation&) const = default;
};

void validate_orientation(const Orientation& o);

inline constexpr double kDefaultAlbedo = 0.2;

struct PoaComponents {
  double beam = 0.0;
  double sky_diffuse = 0.0;
  double ground = 0.0;
  double total() const { return beam + sky_diffuse + ground; }
};

// Isotropic-sky transposition.
PoaComponents poa_components(const WeatherRecord& rec, const SolarPosition& sun,
                             const Orientation& o, double albedo = kDefaultAlbedo);
double poa_irradiance(const WeatherRecord& rec, const SolarPosition& sun,
                      const Orientation& o, double albedo = kDefaultAlbedo);

// NOCT model: temp_air + (noct - 20) / 800 * poa.
double cell_temperature(double poa_w_m2, double temp_air_c, double noct_c);

// rated * poa/1000 * (1 + gamma * (t_cell - 25)) * derate, clamped at 0.
double dc_power(double poa_w_m2, double t_cell_c, const PanelSpec& panel,
                double gamma_per_c, double derate);

struct PvModelParams {
  double noct_c = 45.0;
  double gamma_per_c = -0.0035;
  double system_derate = 0.86;
  double albedo = kDefaultAlbedo;

  bool operator==(const PvModelParams&) const = default;
};

struct WeightedOrientation {
  Orientation orientation;
  double weight = 1.0;
  bool operator==(const WeightedOrientation&) const = default;
};

struct SurfaceConfig {
  Cell cell;
  std::vector<WeightedOrientation> orientations;
  PvModelParams params;

  bool operator==(const SurfaceConfig&) const = default;
};

// Throws ValidationError for empty/negative weights or weights not summing to 1.
void validate_surface(const SurfaceConfig& cfg);

// Rooftop: tilt = |latitude| facing the equator. Facade and window: vertical,
// equator-facing.
SurfaceConfig default_surface_config(const Cell& cell, double latitude_deg,
                                     const PvModelParams& params = {});

struct YieldOptions {
  // Require the series to span at least 365 days.
  bool require_full_year = true;
  bool keep_trace = false;
};

struct YieldResult {
  double kwh_per_panel_yr = 0.0;
  double kwh_per_kwp_yr = 0.0;
  // Missing steps filled with zero generation.
  std::int64_t filled_gap_steps = 0;
  std::vector<std::string> warnings;
  // Per-record DC power in watts, when requested.
  std::vector<double> trace_w;
};

inline constexpr int kMaxGapSteps = 3;

YieldResult annual_yield(const WeatherSeries& series, const SurfaceConfig& cfg,
                         const PanelSpec& panel, double latitude_deg,
                         double longitude_deg, const YieldOptions& options = {});

// Deterministic synthetic hourly year (local time at `utc_offset_hours`) with
// clear-sky irradiance scaled by a seeded cloudiness process and split into
// beam and diffuse with the Erbs correlation. Records satisfy
// ghi == dni * max(0, cos(zenith)) + dhi using solar_position().
WeatherSeries synthetic_weather(int year, double latitude_deg, double longitude_deg,
                                int utc_offset_hours, std::uint32_t seed);

}  // namespace bipv
