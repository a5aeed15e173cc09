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

// Dense-bitmap oracles and random generators shared by the test suites.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <random>
#include <vector>

#include "bipv/mask.hpp"

namespace bipv::testing {

inline std::filesystem::path data_dir() { return BIPV_TEST_DATA_DIR; }

// Random grid with foreground density `p`. Sparse, dense and blocky grids all
// come out of the same generator by varying p and block size.
inline Bitmap random_bitmap(std::mt19937& rng, std::int64_t w, std::int64_t h, double p,
                            std::int64_t block = 1) {
  std::bernoulli_distribution fg(p);
  Bitmap b{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 0)};
  for (std::int64_t r = 0; r < h; r += block) {
    for (std::int64_t c = 0; c < w; c += block) {
      const std::uint8_t v = fg(rng) ? 1 : 0;
      for (std::int64_t rr = r; rr < std::min(h, r + block); ++rr) {
        for (std::int64_t cc = c; cc < std::min(w, c + block); ++cc) {
          b.bits[static_cast<std::size_t>(rr * w + cc)] = v;
        }
      }
    }
  }
  return b;
}

inline Bitmap random_bitmap(std::mt19937& rng, std::int64_t w, std::int64_t h) {
  std::uniform_real_distribution<double> density(0.0, 1.0);
  std::uniform_int_distribution<int> block(1, 4);
  return random_bitmap(rng, w, h, density(rng), block(rng));
}

template <typename Op>
Bitmap dense_apply(const Bitmap& a, const Bitmap& b, Op op) {
  Bitmap out{a.width, a.height, std::vector<std::uint8_t>(a.bits.size())};
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    out.bits[i] = op(a.bits[i] != 0, b.bits[i] != 0) ? 1 : 0;
  }
  return out;
}

inline std::int64_t dense_count(const Bitmap& b) {
  std::int64_t n = 0;
  for (auto v : b.bits) n += v != 0;
  return n;
}

inline Bitmap rect_bitmap(std::int64_t w, std::int64_t h, std::int64_t x0, std::int64_t y0,
                          std::int64_t x1, std::int64_t y1) {
  Bitmap b{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w * h), 0)};
  for (std::int64_t y = y0; y < y1; ++y) {
    for (std::int64_t x = x0; x < x1; ++x) b.bits[static_cast<std::size_t>(y * w + x)] = 1;
  }
  return b;
}

// Fresh copy of the two-tile fixture under the temp directory.
inline std::filesystem::path scratch_fixture(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("bipv_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::copy(data_dir() / "fixture", dir, fs::copy_options::recursive);
  fs::remove_all(dir / "out");
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// File name -> contents for every regular file directly in `dir`.
inline std::map<std::string, std::string> dir_contents(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) out[e.path().filename().string()] = slurp(e.path());
  }
  return out;
}

}  // namespace bipv::testing
