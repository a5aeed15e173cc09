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

#include "bipv/mask.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"
#include "json_util.hpp"

namespace bipv {

namespace {

constexpr std::int64_t kMaxPixels = std::numeric_limits<RleMask::Run>::max();

void check_shape(std::int64_t w, std::int64_t h) {
  if (w < 1 || h < 1) {
    throw ValidationError(fmt::format("mask dimensions {}x{} must be positive", w, h));
  }
  if (w * h > kMaxPixels) {
    throw ValidationError(fmt::format("mask {}x{} exceeds the run-length range", w, h));
  }
}

// Appends runs while keeping the canonical form (leading background run,
// positive interior runs, adjacent equal values merged).
class RunBuilder {
 public:
  void push(bool value, std::int64_t length) {
    if (length <= 0) return;
    if (runs_.empty()) {
      if (value) runs_.push_back(0);
      runs_.push_back(static_cast<RleMask::Run>(length));
      return;
    }
    const bool last_value = (runs_.size() % 2) == 0;
    if (last_value == value) {
      runs_.back() += static_cast<RleMask::Run>(length);
    } else {
      runs_.push_back(static_cast<RleMask::Run>(length));
    }
  }

  std::vector<RleMask::Run> take() { return std::move(runs_); }

 private:
  std::vector<RleMask::Run> runs_;
};

// Walks the runs of a mask as (value, length) segments.
class RunCursor {
 public:
  explicit RunCursor(const RleMask& m) : runs_(m.runs()) { advance_to_nonempty(); }

  bool done() const { return index_ >= runs_.size(); }
  bool value() const { return (index_ % 2) == 1; }
  std::int64_t remaining() const { return remaining_; }

  void consume(std::int64_t n) {
    remaining_ -= n;
    if (remaining_ == 0) {
      ++index_;
      advance_to_nonempty();
    }
  }

 private:
  void advance_to_nonempty() {
    while (index_ < runs_.size() && runs_[index_] == 0) ++index_;
    remaining_ = index_ < runs_.size() ? runs_[index_] : 0;
  }

  const std::vector<RleMask::Run>& runs_;
  std::size_t index_ = 0;
  std::int64_t remaining_ = 0;
};

template <typename Op>
RleMask combine(const RleMask& a, const RleMask& b, Op op, const char* what) {
  if (!a.same_shape(b)) {
    throw ValidationError(fmt::format("{}: dimension mismatch {}x{} vs {}x{}", what,
                                      a.width(), a.height(), b.width(), b.height()));
  }
  RunCursor ca(a);
  RunCursor cb(b);
  RunBuilder out;
  while (!ca.done() && !cb.done()) {
    const std::int64_t step = std::min(ca.remaining(), cb.remaining());
    out.push(op(ca.value(), cb.value()), step);
    ca.consume(step);
    cb.consume(step);
  }
  return RleMask(a.width(), a.height(), out.take());
}

}  // namespace

RleMask::RleMask(std::int64_t width_px, std::int64_t height_px, std::vector<Run> runs)
    : width_(width_px), height_(height_px), runs_(std::move(runs)) {
  check_shape(width_, height_);
  if (runs_.empty()) throw ValidationError("corrupt mask: no runs");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    if (i > 0 && runs_[i] == 0) {
      throw ValidationError(fmt::format("corrupt mask: zero-length run at index {}", i));
    }
    sum += runs_[i];
  }
  if (sum != width_ * height_) {
    throw ValidationError(fmt::format(
        "corrupt mask: runs sum to {} but {}x{} has {} pixels", sum, width_, height_,
        width_ * height_));
  }
}

RleMask RleMask::empty(std::int64_t width_px, std::int64_t height_px) {
  check_shape(width_px, height_px);
  return RleMask(width_px, height_px, {static_cast<Run>(width_px * height_px)});
}

RleMask RleMask::full(std::int64_t width_px, std::int64_t height_px) {
  check_shape(width_px, height_px);
  return RleMask(width_px, height_px, {0, static_cast<Run>(width_px * height_px)});
}

RleMask rle_encode(const Bitmap& bitmap) {
  check_shape(bitmap.width, bitmap.height);
  if (static_cast<std::int64_t>(bitmap.bits.size()) != bitmap.width * bitmap.height) {
    throw ValidationError(fmt::format("bitmap has {} cells, expected {}x{}",
                                      bitmap.bits.size(), bitmap.width, bitmap.height));
  }
  RunBuilder out;
  bool current = false;
  std::int64_t length = 0;
  for (std::uint8_t px : bitmap.bits) {
    const bool v = px != 0;
    if (v != current) {
      out.push(current, length);
      current = v;
      length = 0;
    }
    ++length;
  }
  out.push(current, length);
  return RleMask(bitmap.width, bitmap.height, out.take());
}

Bitmap rle_decode(const RleMask& mask) {
  Bitmap bm{mask.width(), mask.height(), {}};
  bm.bits.reserve(static_cast<std::size_t>(mask.pixel_total()));
  for (std::size_t i = 0; i < mask.runs().size(); ++i) {
    bm.bits.insert(bm.bits.end(), mask.runs()[i], static_cast<std::uint8_t>(i % 2));
  }
  return bm;
}

std::int64_t pixel_count(const RleMask& mask) {
  std::int64_t n = 0;
  const auto& runs = mask.runs();
  for (std::size_t i = 1; i < runs.size(); i += 2) n += runs[i];
  return n;
}

RleMask mask_union(const RleMask& a, const RleMask& b) {
  return combine(a, b, [](bool x, bool y) { return x || y; }, "union");
}

RleMask mask_intersection(const RleMask& a, const RleMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && y; }, "intersection");
}

RleMask mask_difference(const RleMask& a, const RleMask& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; }, "difference");
}

RleMask mask_complement(const RleMask& a) {
  RunBuilder out;
  for (std::size_t i = 0; i < a.runs().size(); ++i) {
    out.push(i % 2 == 0, a.runs()[i]);
  }
  return RleMask(a.width(), a.height(), out.take());
}

RleMask union_mask(std::span<const RleMask> masks) {
  if (masks.empty()) throw InvalidParameter("union_mask: empty mask list");
  for (std::size_t i = 1; i < masks.size(); ++i) {
    if (!masks[i].same_shape(masks[0])) {
      throw ValidationError(fmt::format(
          "union_mask: mask {} is {}x{}, expected {}x{}", i, masks[i].width(),
          masks[i].height(), masks[0].width(), masks[0].height()));
    }
  }
  RleMask acc = masks[0];
  for (std::size_t i = 1; i < masks.size(); ++i) acc = mask_union(acc, masks[i]);
  return acc;
}

std::int64_t overlap_count(const RleMask& a, const RleMask& b) {
  if (!a.same_shape(b)) {
    throw ValidationError(fmt::format("overlap: dimension mismatch {}x{} vs {}x{}",
                                      a.width(), a.height(), b.width(), b.height()));
  }
  RunCursor ca(a);
  RunCursor cb(b);
  std::int64_t n = 0;
  while (!ca.done() && !cb.done()) {
    const std::int64_t step = std::min(ca.remaining(), cb.remaining());
    if (ca.value() && cb.value()) n += step;
    ca.consume(step);
    cb.consume(step);
  }
  return n;
}

// ---------------------------------------------------------------------------

TilePrediction filter_by_threshold(const TilePrediction& pred, double box_threshold) {
  if (!(box_threshold >= 0.0 && box_threshold <= 1.0)) {
    throw InvalidParameter(
        fmt::format("box threshold {} outside [0, 1]", box_threshold));
  }
  TilePrediction out{pred.tile_id, {}};
  for (const auto& inst : pred.instances) {
    if (inst.score >= box_threshold) out.instances.push_back(inst);
  }
  return out;
}

bool StreamSelector::matches(const InstanceMask& inst) const {
  if (inst.category != category) return false;
  if (prompt_id && inst.prompt_id != prompt_id) return false;
  return true;
}

RleMask stream_mask(const TilePrediction& pred, const StreamSelector& selector,
                    double box_threshold, std::int64_t width_px,
                    std::int64_t height_px) {
  if (!(box_threshold >= 0.0 && box_threshold <= 1.0)) {
    throw InvalidParameter(
        fmt::format("box threshold {} outside [0, 1]", box_threshold));
  }
  RleMask acc = RleMask::empty(width_px, height_px);
  for (std::size_t i = 0; i < pred.instances.size(); ++i) {
    const auto& inst = pred.instances[i];
    if (inst.score < box_threshold || !selector.matches(inst)) continue;
    if (!inst.mask.same_shape(acc)) {
      throw ValidationError(fmt::format(
          "tile '{}': instance {} is {}x{}, tile is {}x{}", pred.tile_id, i,
          inst.mask.width(), inst.mask.height(), width_px, height_px));
    }
    acc = mask_union(acc, inst.mask);
  }
  return acc;
}

std::vector<std::string> prediction_violations(const TilePrediction& pred,
                                               const TileMeta& tile) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < pred.instances.size(); ++i) {
    const auto& inst = pred.instances[i];
    if (inst.mask.width() != tile.width_px || inst.mask.height() != tile.height_px) {
      out.push_back(fmt::format("tile '{}': instance {} is {}x{}, manifest says {}x{}",
                                pred.tile_id, i, inst.mask.width(), inst.mask.height(),
                                tile.width_px, tile.height_px));
    }
    if (!(inst.score >= 0.0 && inst.score <= 1.0)) {
      out.push_back(fmt::format("tile '{}': instance {} score {} outside [0, 1]",
                                pred.tile_id, i, inst.score));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

GroundTruthMap::GroundTruthMap(std::string tile_id,
                               std::array<RleMask, kNumLabelCodes> labels)
    : tile_id_(std::move(tile_id)), labels_(std::move(labels)) {
  const RleMask& first = labels_[0];
  std::int64_t total = 0;
  for (int code = 0; code < kNumLabelCodes; ++code) {
    const RleMask& m = labels_[static_cast<std::size_t>(code)];
    if (m.runs().empty() || !m.same_shape(first)) {
      throw ValidationError(fmt::format(
          "ground truth '{}': label {} mask missing or has mismatched dimensions",
          tile_id_, code));
    }
    total += pixel_count(m);
  }
  if (total != first.pixel_total()) {
    throw ValidationError(fmt::format(
        "ground truth '{}': label masks cover {} pixels, grid has {}", tile_id_, total,
        first.pixel_total()));
  }
  RleMask covered = union_mask(labels_);
  if (pixel_count(covered) != first.pixel_total()) {
    throw ValidationError(
        fmt::format("ground truth '{}': label masks overlap", tile_id_));
  }
}

GroundTruthMap GroundTruthMap::from_labels(std::string tile_id, std::int64_t width_px,
                                           std::int64_t height_px,
                                           std::span<const std::uint8_t> labels) {
  check_shape(width_px, height_px);
  if (static_cast<std::int64_t>(labels.size()) != width_px * height_px) {
    throw ValidationError(fmt::format("label grid has {} cells, expected {}x{}",
                                      labels.size(), width_px, height_px));
  }
  std::array<RleMask, kNumLabelCodes> masks;
  for (int code = 0; code < kNumLabelCodes; ++code) {
    Bitmap bm{width_px, height_px, {}};
    bm.bits.reserve(labels.size());
    for (std::uint8_t v : labels) {
      if (v >= kNumLabelCodes) {
        throw ValidationError(fmt::format("label code {} outside 0..6", int{v}));
      }
      bm.bits.push_back(v == code ? 1 : 0);
    }
    masks[static_cast<std::size_t>(code)] = rle_encode(bm);
  }
  return GroundTruthMap(std::move(tile_id), std::move(masks));
}

const RleMask& GroundTruthMap::label(int code) const {
  if (code < 0 || code >= kNumLabelCodes) {
    throw InvalidParameter(fmt::format("label code {} outside 0..6", code));
  }
  return labels_[static_cast<std::size_t>(code)];
}

RleMask GroundTruthMap::all_buildings() const { return mask_complement(labels_[0]); }

// ---------------------------------------------------------------------------

nlohmann::json rle_to_json(const RleMask& mask) {
  return {{"width_px", mask.width()}, {"height_px", mask.height()}, {"runs", mask.runs()}};
}

RleMask rle_from_json(const nlohmann::json& doc, const std::string& where) {
  const auto w = detail::require_integer(doc, "width_px", where);
  const auto h = detail::require_integer(doc, "height_px", where);
  const auto& jruns = detail::require(doc, "runs", where);
  if (!jruns.is_array()) throw SchemaError(where + ": 'runs' must be an array");
  std::vector<RleMask::Run> runs;
  runs.reserve(jruns.size());
  for (const auto& r : jruns) {
    if (!r.is_number_integer() || r.get<std::int64_t>() < 0 ||
        r.get<std::int64_t>() > kMaxPixels) {
      throw SchemaError(where + ": runs must be non-negative integers");
    }
    runs.push_back(r.get<RleMask::Run>());
  }
  try {
    return RleMask(w, h, std::move(runs));
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

nlohmann::json prediction_to_json(const TilePrediction& pred) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& inst : pred.instances) {
    nlohmann::json j;
    if (inst.category) {
      j["category"] = category_code(*inst.category);
    } else {
      j["category"] = "all";
    }
    j["score"] = inst.score;
    if (inst.prompt_id) j["prompt_id"] = *inst.prompt_id;
    j["rle"] = rle_to_json(inst.mask);
    instances.push_back(std::move(j));
  }
  return {{"tile_id", pred.tile_id}, {"instances", std::move(instances)}};
}

TilePrediction parse_prediction(const nlohmann::json& doc, const std::string& where) {
  TilePrediction pred;
  pred.tile_id = detail::require_string(doc, "tile_id", where);
  const auto& jinst = detail::require(doc, "instances", where);
  if (!jinst.is_array()) throw SchemaError(where + ": 'instances' must be an array");
  pred.instances.reserve(jinst.size());
  for (std::size_t i = 0; i < jinst.size(); ++i) {
    const auto& ji = jinst[i];
    const std::string iwhere = fmt::format("{}: instances[{}]", where, i);
    InstanceMask inst;
    const auto& jc = detail::require(ji, "category", iwhere);
    if (jc.is_string() && jc.get<std::string>() == "all") {
      inst.category.reset();
    } else if (jc.is_number_integer()) {
      const auto code = jc.get<std::int64_t>();
      if (code < 1 || code > kNumCategories) {
        throw SchemaError(fmt::format("{}: category {} outside 1..6", iwhere, code));
      }
      inst.category = static_cast<BuildingCategory>(code);
    } else {
      throw SchemaError(iwhere + ": 'category' must be 1..6 or \"all\"");
    }
    inst.score = detail::require_number(ji, "score", iwhere);
    if (!(inst.score >= 0.0 && inst.score <= 1.0)) {
      throw ValidationError(fmt::format("{}: score {} outside [0, 1]", iwhere, inst.score));
    }
    if (auto it = ji.find("prompt_id"); it != ji.end() && !it->is_null()) {
      if (!it->is_string()) throw SchemaError(iwhere + ": 'prompt_id' must be a string");
      inst.prompt_id = it->get<std::string>();
    }
    inst.mask = rle_from_json(detail::require(ji, "rle", iwhere), iwhere + ".rle");
    pred.instances.push_back(std::move(inst));
  }
  return pred;
}

TilePrediction load_prediction(const std::filesystem::path& path) {
  return parse_prediction(detail::read_json_file(path), path.string());
}

nlohmann::json ground_truth_to_json(const GroundTruthMap& gt) {
  nlohmann::json labels = nlohmann::json::object();
  for (int code = 0; code < kNumLabelCodes; ++code) {
    labels[std::to_string(code)] = rle_to_json(gt.label(code));
  }
  return {{"tile_id", gt.tile_id()},
          {"width_px", gt.width()},
          {"height_px", gt.height()},
          {"labels", std::move(labels)}};
}

GroundTruthMap parse_ground_truth(const nlohmann::json& doc, const std::string& where) {
  std::string tile_id = detail::require_string(doc, "tile_id", where);
  const auto w = detail::require_integer(doc, "width_px", where);
  const auto h = detail::require_integer(doc, "height_px", where);
  const auto& jl = detail::require(doc, "labels", where);
  if (!jl.is_object()) throw SchemaError(where + ": 'labels' must be an object");
  std::array<RleMask, kNumLabelCodes> masks;
  std::array<bool, kNumLabelCodes> present{};
  for (const auto& [key, value] : jl.items()) {
    int code = -1;
    if (key.size() == 1 && key[0] >= '0' && key[0] <= '6') code = key[0] - '0';
    if (code < 0) {
      throw SchemaError(fmt::format("{}: label key '{}' is not a code 0..6", where, key));
    }
    masks[static_cast<std::size_t>(code)] =
        rle_from_json(value, fmt::format("{}: labels[{}]", where, key));
    present[static_cast<std::size_t>(code)] = true;
  }
  for (int code = 0; code < kNumLabelCodes; ++code) {
    auto& m = masks[static_cast<std::size_t>(code)];
    if (!present[static_cast<std::size_t>(code)]) m = RleMask::empty(w, h);
    if (m.width() != w || m.height() != h) {
      throw ValidationError(fmt::format("{}: label {} is {}x{}, expected {}x{}", where,
                                        code, m.width(), m.height(), w, h));
    }
  }
  return GroundTruthMap(std::move(tile_id), std::move(masks));
}

GroundTruthMap load_ground_truth(const std::filesystem::path& path) {
  return parse_ground_truth(detail::read_json_file(path), path.string());
}

namespace {

std::vector<std::filesystem::path> json_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw MissingInputError(fmt::format("directory '{}' not found", dir.string()));
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::vector<TilePrediction> load_prediction_dir(const std::filesystem::path& dir) {
  std::map<std::string, TilePrediction> by_id;
  for (const auto& path : json_files(dir)) {
    TilePrediction p = load_prediction(path);
    std::string id = p.tile_id;
    if (!by_id.emplace(id, std::move(p)).second) {
      throw SchemaError(fmt::format("{}: duplicate prediction for tile '{}'",
                                    path.string(), id));
    }
  }
  std::vector<TilePrediction> out;
  out.reserve(by_id.size());
  for (auto& [id, p] : by_id) out.push_back(std::move(p));
  return out;
}

std::vector<GroundTruthMap> load_ground_truth_dir(const std::filesystem::path& dir) {
  std::map<std::string, GroundTruthMap> by_id;
  for (const auto& path : json_files(dir)) {
    GroundTruthMap g = load_ground_truth(path);
    std::string id = g.tile_id();
    if (!by_id.emplace(id, std::move(g)).second) {
      throw SchemaError(fmt::format("{}: duplicate ground truth for tile '{}'",
                                    path.string(), id));
    }
  }
  std::vector<GroundTruthMap> out;
  out.reserve(by_id.size());
  for (auto& [id, g] : by_id) out.push_back(std::move(g));
  return out;
}

}  // namespace bipv
