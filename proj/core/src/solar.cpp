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

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "bipv/error.hpp"
#include "json_util.hpp"

namespace bipv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr std::int64_t kSecondsPerDay = 86400;

using std::chrono::days;
using std::chrono::sys_days;
using std::chrono::year_month_day;

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char ch = text[i];
    if (ch < '0' || ch > '9') return false;
    v = v * 10 + (ch - '0');
  }
  out = v;
  return true;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
  throw ValidationError(fmt::format("malformed timestamp '{}'", text));
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!parse_fixed_int(text, 0, 4, y) || text.size() < 16 || text[4] != '-' ||
      !parse_fixed_int(text, 5, 2, mo) || text[7] != '-' ||
      !parse_fixed_int(text, 8, 2, d) || (text[10] != 'T' && text[10] != ' ') ||
      !parse_fixed_int(text, 11, 2, h) || text[13] != ':' ||
      !parse_fixed_int(text, 14, 2, mi)) {
    bad_timestamp(text);
  }
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!parse_fixed_int(text, pos + 1, 2, s)) bad_timestamp(text);
    pos += 3;
  }
  int offset = 0;
  if (pos >= text.size()) bad_timestamp(text);  // offset is mandatory
  if (text[pos] == 'Z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    int oh = 0, om = 0;
    if (!parse_fixed_int(text, pos + 1, 2, oh)) bad_timestamp(text);
    std::size_t mpos = pos + 3;
    if (mpos < text.size() && text[mpos] == ':') ++mpos;
    if (!parse_fixed_int(text, mpos, 2, om)) bad_timestamp(text);
    offset = (oh * 60 + om) * (text[pos] == '-' ? -1 : 1);
    pos = mpos + 2;
  } else {
    bad_timestamp(text);
  }
  if (pos != text.size()) bad_timestamp(text);

  const year_month_day ymd{std::chrono::year{y},
                           std::chrono::month{static_cast<unsigned>(mo)},
                           std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60 || offset < -18 * 60 || offset > 18 * 60) {
    bad_timestamp(text);
  }
  const std::int64_t local = sys_days{ymd}.time_since_epoch().count() * kSecondsPerDay +
                             h * 3600 + mi * 60 + s;
  return {local - offset * 60, offset};
}

namespace {

struct CivilTime {
  year_month_day ymd;
  int hour, minute, second;
};

CivilTime to_civil(std::int64_t seconds) {
  std::int64_t day = seconds / kSecondsPerDay;
  std::int64_t rem = seconds % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --day;
  }
  return {year_month_day{sys_days{days{day}}}, static_cast<int>(rem / 3600),
          static_cast<int>((rem % 3600) / 60), static_cast<int>(rem % 60)};
}

}  // namespace

std::string format_timestamp(const Timestamp& ts) {
  const CivilTime c = to_civil(ts.utc_seconds + ts.offset_minutes * 60);
  std::string offset;
  if (ts.offset_minutes == 0) {
    offset = "Z";
  } else {
    const int a = std::abs(ts.offset_minutes);
    offset = fmt::format("{}{:02}:{:02}", ts.offset_minutes < 0 ? '-' : '+', a / 60, a % 60);
  }
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}{}", int(c.ymd.year()),
                     unsigned(c.ymd.month()), unsigned(c.ymd.day()), c.hour, c.minute,
                     c.second, offset);
}

int local_year(const Timestamp& ts) {
  return int(to_civil(ts.utc_seconds + ts.offset_minutes * 60).ymd.year());
}

std::int64_t WeatherSeries::step_seconds() const {
  if (records.size() < 2) return 0;
  return records[1].time.utc_seconds - records[0].time.utc_seconds;
}

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double_field(std::string_view field, std::string_view source,
                          std::size_t line, std::string_view column) {
  field = trim(field);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end || field.empty() || !std::isfinite(v)) {
    throw ValidationError(fmt::format("{}:{}: column '{}' is not a number: '{}'", source,
                                      line, column, field));
  }
  return v;
}

}  // namespace

WeatherSeries parse_weather_csv(std::string_view text, std::string_view source) {
  WeatherSeries series;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (!header_seen) {
      if (line != kWeatherCsvHeader) {
        throw SchemaError(fmt::format("{}:{}: expected header '{}'", source, line_no,
                                      kWeatherCsvHeader));
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw ValidationError(fmt::format("{}:{}: expected 6 columns, found {}", source,
                                        line_no, fields.size()));
    }
    WeatherRecord r;
    try {
      r.time = parse_timestamp(trim(fields[0]));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
    r.ghi = parse_double_field(fields[1], source, line_no, "ghi");
    r.dni = parse_double_field(fields[2], source, line_no, "dni");
    r.dhi = parse_double_field(fields[3], source, line_no, "dhi");
    r.temp_air = parse_double_field(fields[4], source, line_no, "temp_air");
    r.wind_speed = parse_double_field(fields[5], source, line_no, "wind_speed");
    if (r.ghi < 0.0 || r.dni < 0.0 || r.dhi < 0.0) {
      throw ValidationError(
          fmt::format("{}:{}: negative irradiance", source, line_no));
    }
    if (!series.records.empty() &&
        r.time.utc_seconds <= series.records.back().time.utc_seconds) {
      throw ValidationError(fmt::format(
          "{}:{}: timestamp {} does not follow {}", source, line_no,
          format_timestamp(r.time), format_timestamp(series.records.back().time)));
    }
    series.records.push_back(r);
  }
  if (!header_seen) {
    throw SchemaError(fmt::format("{}: empty weather file (header required)", source));
  }
  return series;
}

WeatherSeries load_weather(const std::filesystem::path& path) {
  return parse_weather_csv(detail::read_text_file(path), path.string());
}

std::string weather_csv(const WeatherSeries& series) {
  std::string out(kWeatherCsvHeader);
  out += '\n';
  for (const auto& r : series.records) {
    out += fmt::format("{},{:.3f},{:.3f},{:.3f},{:.2f},{:.2f}\n", format_timestamp(r.time),
                       r.ghi, r.dni, r.dhi, r.temp_air, r.wind_speed);
  }
  return out;
}

// ---------------------------------------------------------------------------

SolarPosition solar_position(std::int64_t utc_seconds, double latitude_deg,
                             double longitude_deg) {
  const CivilTime c = to_civil(utc_seconds);
  const auto year_start = sys_days{c.ymd.year() / std::chrono::January / 1};
  const int doy = static_cast<int>((sys_days{c.ymd} - year_start).count()) + 1;
  const double days_in_year = c.ymd.year().is_leap() ? 366.0 : 365.0;
  const double hour = c.hour + c.minute / 60.0 + c.second / 3600.0;

  // Fractional year, radians.
  const double g = 2.0 * kPi / days_in_year * (doy - 1 + (hour - 12.0) / 24.0);
  const double eqtime =
      229.18 * (0.000075 + 0.001868 * std::cos(g) - 0.032077 * std::sin(g) -
                0.014615 * std::cos(2 * g) - 0.040849 * std::sin(2 * g));
  const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                      0.006758 * std::cos(2 * g) + 0.000907 * std::sin(2 * g) -
                      0.002697 * std::cos(3 * g) + 0.00148 * std::sin(3 * g);

  const double true_solar_min = hour * 60.0 + eqtime + 4.0 * longitude_deg;
  const double hour_angle = (true_solar_min / 4.0 - 180.0) * kDeg;
  const double lat = latitude_deg * kDeg;

  double cos_z = std::sin(lat) * std::sin(decl) +
                 std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
  cos_z = std::clamp(cos_z, -1.0, 1.0);
  const double zenith = std::acos(cos_z);

  // Clockwise from north; 180 at solar noon for northern mid-latitudes.
  const double az = std::atan2(std::sin(hour_angle),
                               std::cos(hour_angle) * std::sin(lat) -
                                   std::tan(decl) * std::cos(lat));
  double az_deg = az / kDeg + 180.0;
  az_deg = std::fmod(az_deg, 360.0);
  if (az_deg < 0.0) az_deg += 360.0;

  return {zenith / kDeg, az_deg, decl / kDeg, eqtime};
}

void validate_orientation(const Orientation& o) {
  if (!(o.tilt_deg >= 0.0 && o.tilt_deg <= 90.0)) {
    throw ValidationError(fmt::format("tilt {} outside [0, 90]", o.tilt_deg));
  }
  if (!(o.azimuth_deg >= 0.0 && o.azimuth_deg < 360.0)) {
    throw ValidationError(fmt::format("azimuth {} outside [0, 360)", o.azimuth_deg));
  }
}

PoaComponents poa_components(const WeatherRecord& rec, const SolarPosition& sun,
                             const Orientation& o, double albedo) {
  const double tilt = o.tilt_deg * kDeg;
  const double zen = sun.zenith_deg * kDeg;
  const double cos_tilt = std::cos(tilt);
  const double cos_inc =
      std::cos(zen) * cos_tilt +
      std::sin(zen) * std::sin(tilt) * std::cos((sun.azimuth_deg - o.azimuth_deg) * kDeg);
  PoaComponents p;
  p.beam = rec.dni * std::max(0.0, cos_inc);
  p.sky_diffuse = rec.dhi * (1.0 + cos_tilt) / 2.0;
  p.ground = rec.ghi * albedo * (1.0 - cos_tilt) / 2.0;
  return p;
}

double poa_irradiance(const WeatherRecord& rec, const SolarPosition& sun,
                      const Orientation& o, double albedo) {
  return std::max(0.0, poa_components(rec, sun, o, albedo).total());
}

double cell_temperature(double poa_w_m2, double temp_air_c, double noct_c) {
  if (!(poa_w_m2 >= 0.0)) {
    throw InvalidParameter(fmt::format("POA irradiance {} must be non-negative", poa_w_m2));
  }
  return temp_air_c + (noct_c - 20.0) / 800.0 * poa_w_m2;
}

double dc_power(double poa_w_m2, double t_cell_c, const PanelSpec& panel,
                double gamma_per_c, double derate) {
  if (!(poa_w_m2 >= 0.0)) {
    throw InvalidParameter(fmt::format("POA irradiance {} must be non-negative", poa_w_m2));
  }
  const double p = panel.rated_power_w * (poa_w_m2 / 1000.0) *
                   (1.0 + gamma_per_c * (t_cell_c - 25.0)) * derate;
  return std::max(0.0, p);
}

void validate_surface(const SurfaceConfig& cfg) {
  if (cfg.orientations.empty()) {
    throw ValidationError(fmt::format("{}: no orientations", cell_label(cfg.cell)));
  }
  double sum = 0.0;
  for (const auto& wo : cfg.orientations) {
    validate_orientation(wo.orientation);
    if (!(wo.weight > 0.0)) {
      throw ValidationError(
          fmt::format("{}: orientation weight {} must be positive", cell_label(cfg.cell),
                      wo.weight));
    }
    sum += wo.weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError(
        fmt::format("{}: orientation weights sum to {}, not 1", cell_label(cfg.cell), sum));
  }
  if (!(cfg.params.system_derate > 0.0 && cfg.params.system_derate <= 1.0)) {
    throw ValidationError(fmt::format("{}: system derate {} outside (0, 1]",
                                      cell_label(cfg.cell), cfg.params.system_derate));
  }
}

SurfaceConfig default_surface_config(const Cell& cell, double latitude_deg,
                                     const PvModelParams& params) {
  const double equator_facing = latitude_deg >= 0.0 ? 180.0 : 0.0;
  Orientation o{90.0, equator_facing};
  if (cell.type == BipvType::kRooftop) o.tilt_deg = std::min(90.0, std::abs(latitude_deg));
  return {cell, {{o, 1.0}}, params};
}

YieldResult annual_yield(const WeatherSeries& series, const SurfaceConfig& cfg,
                         const PanelSpec& panel, double latitude_deg,
                         double longitude_deg, const YieldOptions& options) {
  validate_surface(cfg);
  if (!(std::abs(latitude_deg) <= 90.0)) {
    throw InvalidParameter(fmt::format("latitude {} outside [-90, 90]", latitude_deg));
  }
  const auto& recs = series.records;
  if (recs.size() < 2) throw ValidationError("weather series needs at least two records");
  const std::int64_t step = series.step_seconds();
  if (step <= 0) throw ValidationError("weather series step must be positive");

  YieldResult result;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const std::int64_t delta = recs[i].time.utc_seconds - recs[i - 1].time.utc_seconds;
    if (delta <= 0 || delta % step != 0) {
      throw ValidationError(fmt::format("weather record {} breaks the {} s step", i + 1, step));
    }
    const std::int64_t missing = delta / step - 1;
    if (missing > kMaxGapSteps) {
      throw ValidationError(fmt::format("weather gap of {} steps before {} exceeds {}",
                                        missing, format_timestamp(recs[i].time),
                                        kMaxGapSteps));
    }
    if (missing > 0) {
      result.filled_gap_steps += missing;
      result.warnings.push_back(fmt::format("{} missing step(s) before {} filled with zero",
                                            missing, format_timestamp(recs[i].time)));
    }
  }
  const std::int64_t span = recs.back().time.utc_seconds - recs.front().time.utc_seconds + step;
  if (options.require_full_year && span < 365 * kSecondsPerDay) {
    throw ValidationError(fmt::format("weather series spans {:.1f} days; a full year is required",
                                      static_cast<double>(span) / kSecondsPerDay));
  }

  // Sum each orientation separately, then weight, so a weighted set equals
  // the weighted sum of its single-orientation yields.
  const double step_hours = static_cast<double>(step) / 3600.0;
  const auto& params = cfg.params;
  std::vector<double> watt_sums(cfg.orientations.size(), 0.0);
  if (options.keep_trace) result.trace_w.assign(recs.size(), 0.0);
  for (std::size_t r = 0; r < recs.size(); ++r) {
    const auto& rec = recs[r];
    const SolarPosition sun = solar_position(rec.time.utc_seconds, latitude_deg, longitude_deg);
    for (std::size_t k = 0; k < cfg.orientations.size(); ++k) {
      const double poa = poa_irradiance(rec, sun, cfg.orientations[k].orientation, params.albedo);
      const double t_cell = cell_temperature(poa, rec.temp_air, params.noct_c);
      const double p = dc_power(poa, t_cell, panel, params.gamma_per_c, params.system_derate);
      watt_sums[k] += p;
      if (options.keep_trace) result.trace_w[r] += cfg.orientations[k].weight * p;
    }
  }
  double kwh = 0.0;
  for (std::size_t k = 0; k < cfg.orientations.size(); ++k) {
    kwh += cfg.orientations[k].weight * (watt_sums[k] * step_hours / 1000.0);
  }
  result.kwh_per_panel_yr = kwh;
  result.kwh_per_kwp_yr = kwh / (panel.rated_power_w / 1000.0);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

// Portable uniform in [0, 1): mt19937 output is fully specified, the standard
// distributions are not.
class Uniform {
 public:
  explicit Uniform(std::uint32_t seed) : gen_(seed) {}
  double next() { return static_cast<double>(gen_()) / 4294967296.0; }

 private:
  std::mt19937 gen_;
};

double erbs_diffuse_fraction(double kt) {
  if (kt <= 0.22) return 1.0 - 0.09 * kt;
  if (kt <= 0.80) {
    return 0.9511 - 0.1604 * kt + 4.388 * kt * kt - 16.638 * kt * kt * kt +
           12.336 * kt * kt * kt * kt;
  }
  return 0.165;
}

}  // namespace

WeatherSeries synthetic_weather(int year, double latitude_deg, double longitude_deg,
                                int utc_offset_hours, std::uint32_t seed) {
  Uniform rng(seed);
  const auto first = sys_days{std::chrono::year{year} / std::chrono::January / 1};
  const auto last = sys_days{std::chrono::year{year + 1} / std::chrono::January / 1};
  const int n_days = static_cast<int>((last - first).count());
  const std::int64_t start_local = first.time_since_epoch().count() * kSecondsPerDay;
  const std::int64_t offset_s = std::int64_t{utc_offset_hours} * 3600;

  WeatherSeries series;
  series.records.reserve(static_cast<std::size_t>(n_days) * 24);
  for (int day = 0; day < n_days; ++day) {
    const int doy = day + 1;
    const double season = std::cos(2.0 * kPi * (doy - 172) / 365.0);  // +1 at June solstice
    // Wetter summers: lower mean clearness mid-year.
    const double mean_clear = 0.70 - 0.08 * season;
    const double day_clear = std::clamp(mean_clear + 0.55 * (rng.next() - 0.5), 0.15, 1.0);
    const double extra = 1361.0 * (1.0 + 0.033 * std::cos(2.0 * kPi * doy / 365.0));
    const double t_mean = 13.5 + 13.5 * std::sin(2.0 * kPi * (doy - 105) / 365.0);

    for (int hour = 0; hour < 24; ++hour) {
      const std::int64_t local = start_local + (std::int64_t{day} * 24 + hour) * 3600;
      WeatherRecord r;
      r.time = {local - offset_s, utc_offset_hours * 60};
      const SolarPosition sun = solar_position(r.time.utc_seconds, latitude_deg, longitude_deg);
      const double cos_z = std::cos(sun.zenith_deg * kDeg);
      const double hourly = std::clamp(day_clear + 0.10 * (rng.next() - 0.5), 0.05, 1.0);
      r.temp_air = t_mean + 4.5 * std::sin(2.0 * kPi * (hour - 9) / 24.0) +
                   1.5 * (rng.next() - 0.5);
      r.wind_speed = 1.0 + 3.0 * rng.next();
      if (cos_z > 0.0) {
        const double clear_ghi = 1098.0 * cos_z * std::exp(-0.057 / cos_z);
        const double ghi = clear_ghi * hourly;
        const double kt = std::clamp(ghi / (extra * cos_z), 0.0, 1.0);
        double dhi = ghi * erbs_diffuse_fraction(kt);
        double dni = 0.0;
        if (cos_z > 0.087) {
          dni = (ghi - dhi) / cos_z;
        } else {
          dhi = ghi;
        }
        r.dni = dni;
        r.dhi = dhi;
      }
      r.ghi = r.dni * std::max(0.0, cos_z) + r.dhi;
      series.records.push_back(r);
    }
  }
  return series;
}

}  // namespace bipv
