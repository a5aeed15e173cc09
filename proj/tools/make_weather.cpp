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

// Writes a deterministic synthetic hourly weather year as CSV.
//
//   make_weather --year 2022 --lat 36.8 --lon 118.05 --utc-offset 8 --seed 2022 out.csv

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bipv/solar.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic weather year generator"};
  int year = 2022;
  double lat = 36.8;
  double lon = 118.05;
  int offset = 8;
  std::uint32_t seed = 2022;
  std::string out;
  app.add_option("--year", year);
  app.add_option("--lat", lat);
  app.add_option("--lon", lon);
  app.add_option("--utc-offset", offset, "Hours east of UTC");
  app.add_option("--seed", seed);
  app.add_option("output", out)->required();
  CLI11_PARSE(app, argc, argv);

  const bipv::WeatherSeries s = bipv::synthetic_weather(year, lat, lon, offset, seed);
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write " << out << "\n";
    return 3;
  }
  f << bipv::weather_csv(s);
  std::cout << "wrote " << s.records.size() << " records to " << out << "\n";
  return 0;
}
