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

#include "bipv/metrics.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bipv/error.hpp"
#include "bipv/parallel.hpp"

namespace bipv {

ConfusionCounts confusion(const RleMask& pred, const RleMask& truth) {
  if (!pred.same_shape(truth)) {
    throw ValidationError(fmt::format("confusion: prediction {}x{} vs truth {}x{}",
                                      pred.width(), pred.height(), truth.width(),
                                      truth.height()));
  }
  ConfusionCounts c;
  c.tp = overlap_count(pred, truth);
  c.fp = pixel_count(pred) - c.tp;
  c.fn = pixel_count(truth) - c.tp;
  c.tn = pred.pixel_total() - c.tp - c.fp - c.fn;
  return c;
}

double pixel_accuracy(const ConfusionCounts& c) {
  const std::int64_t total = c.total();
  if (total <= 0) throw ComputationError("pixel accuracy undefined for zero pixels");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(total);
}

IouValue iou(const ConfusionCounts& c) {
  const std::int64_t denom = c.tp + c.fp + c.fn;
  if (denom == 0) return {1.0, true};
  return {static_cast<double>(c.tp) / static_cast<double>(denom), false};
}

CategoryMetrics metrics_from_counts(BuildingCategory category, const ConfusionCounts& c) {
  CategoryMetrics m;
  m.category = category;
  m.counts = c;
  m.pa = pixel_accuracy(c);
  const IouValue v = iou(c);
  m.iou = v.value;
  m.empty_class = v.empty_class;
  return m;
}

GroundTruthIndex::GroundTruthIndex(std::span<const GroundTruthMap> maps) {
  sorted_.reserve(maps.size());
  for (const auto& m : maps) sorted_.push_back(&m);
  std::sort(sorted_.begin(), sorted_.end(),
            [](const auto* a, const auto* b) { return a->tile_id() < b->tile_id(); });
  for (std::size_t i = 1; i < sorted_.size(); ++i) {
    if (sorted_[i]->tile_id() == sorted_[i - 1]->tile_id()) {
      throw SchemaError(
          fmt::format("duplicate ground truth for tile '{}'", sorted_[i]->tile_id()));
    }
  }
}

const GroundTruthMap* GroundTruthIndex::find(const std::string& tile_id) const {
  auto it = std::lower_bound(
      sorted_.begin(), sorted_.end(), tile_id,
      [](const GroundTruthMap* m, const std::string& id) { return m->tile_id() < id; });
  if (it == sorted_.end() || (*it)->tile_id() != tile_id) return nullptr;
  return *it;
}

const GroundTruthMap& GroundTruthIndex::at(const std::string& tile_id) const {
  const GroundTruthMap* m = find(tile_id);
  if (m == nullptr) {
    throw MissingInputError(fmt::format("no ground truth for tile '{}'", tile_id));
  }
  return *m;
}

namespace {

// Predicted pixel set for one category. Others has no stream of its own: it
// is the all-buildings stream minus the five measured categories.
RleMask predicted_mask(const TilePrediction& pred, BuildingCategory category,
                       double threshold, const std::optional<std::string>& prompt_id,
                       std::int64_t w, std::int64_t h) {
  if (category != BuildingCategory::kOthers) {
    return stream_mask(pred, {category, prompt_id}, threshold, w, h);
  }
  RleMask all = stream_mask(pred, {std::nullopt, prompt_id}, threshold, w, h);
  for (BuildingCategory c : kAllCategories) {
    if (c == BuildingCategory::kOthers) continue;
    all = mask_difference(all, stream_mask(pred, {c, std::nullopt}, threshold, w, h));
  }
  return all;
}

std::int64_t surviving_instances(const TilePrediction& pred, BuildingCategory category,
                                 double threshold,
                                 const std::optional<std::string>& prompt_id) {
  StreamSelector sel{category == BuildingCategory::kOthers
                         ? std::nullopt
                         : std::optional<BuildingCategory>(category),
                     prompt_id};
  std::int64_t n = 0;
  for (const auto& inst : pred.instances) {
    if (inst.score >= threshold && sel.matches(inst)) ++n;
  }
  return n;
}

struct TileTally {
  ConfusionCounts counts;
  std::int64_t instances = 0;
};

TileTally tally_tile(const TilePrediction& pred, const GroundTruthIndex& truth,
                     BuildingCategory category, double threshold,
                     const std::optional<std::string>& prompt_id) {
  const GroundTruthMap& gt = truth.at(pred.tile_id);
  RleMask p = predicted_mask(pred, category, threshold, prompt_id, gt.width(),
                             gt.height());
  return {confusion(p, gt.category_mask(category)),
          surviving_instances(pred, category, threshold, prompt_id)};
}

TileTally tally_all(std::span<const TilePrediction> preds, const GroundTruthIndex& truth,
                    BuildingCategory category, double threshold,
                    const EvaluationOptions& options) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidParameter(fmt::format("box threshold {} outside [0, 1]", threshold));
  }
  std::vector<TileTally> per_tile(preds.size());
  parallel_for(preds.size(), options.jobs, [&](std::size_t i) {
    per_tile[i] = tally_tile(preds[i], truth, category, threshold, options.prompt_id);
  });
  TileTally sum;
  for (const auto& t : per_tile) {
    sum.counts += t.counts;
    sum.instances += t.instances;
  }
  return sum;
}

}  // namespace

CategoryMetrics evaluate_category(std::span<const TilePrediction> preds,
                                  const GroundTruthIndex& truth,
                                  BuildingCategory category, double box_threshold,
                                  const EvaluationOptions& options) {
  if (preds.empty()) throw MissingInputError("evaluate_category: no predicted tiles");
  const TileTally t = tally_all(preds, truth, category, box_threshold, options);
  return metrics_from_counts(category, t.counts);
}

std::string_view objective_name(Objective o) {
  return o == Objective::kIou ? "iou" : "pa";
}

Objective parse_objective(std::string_view text) {
  if (text == "pa" || text == "PA") return Objective::kPixelAccuracy;
  if (text == "iou" || text == "IoU" || text == "IOU") return Objective::kIou;
  throw InvalidParameter(fmt::format("unknown objective '{}' (expected pa or iou)", text));
}

double SweepResult::objective_at(std::size_t i) const {
  const auto& m = grid.at(i).metrics;
  return objective == Objective::kIou ? m.iou : m.pa;
}

const SweepPoint& SweepResult::best() const {
  for (const auto& p : grid) {
    if (p.threshold == best_threshold) return p;
  }
  throw ComputationError("sweep best threshold not on grid");
}

std::vector<double> default_threshold_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 12; ++k) grid.push_back(k / 20.0);
  return grid;
}

SweepResult threshold_sweep(std::span<const TilePrediction> preds,
                            const GroundTruthIndex& truth, BuildingCategory category,
                            std::span<const double> grid, Objective objective,
                            const EvaluationOptions& options) {
  if (grid.empty()) throw InvalidParameter("threshold sweep: empty grid");
  for (double t : grid) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw InvalidParameter(fmt::format("threshold sweep: {} outside [0, 1]", t));
    }
  }
  if (preds.empty()) throw MissingInputError("threshold sweep: no predicted tiles");

  SweepResult result;
  result.category = category;
  result.objective = objective;
  result.grid.resize(grid.size());
  EvaluationOptions inner = options;
  inner.jobs = 1;
  parallel_for(grid.size(), options.jobs, [&](std::size_t i) {
    const TileTally t = tally_all(preds, truth, category, grid[i], inner);
    result.grid[i] = {grid[i], metrics_from_counts(category, t.counts), t.instances};
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.grid.size(); ++i) {
    const double a = result.objective_at(i);
    const double b = result.objective_at(best);
    if (a > b || (a == b && result.grid[i].threshold < result.grid[best].threshold)) {
      best = i;
    }
  }
  result.best_threshold = result.grid[best].threshold;
  return result;
}

// ---------------------------------------------------------------------------

const PromptTemplate& prompt_template(std::string_view id) {
  for (const auto& t : kPromptTemplates) {
    if (t.id == id) return t;
  }
  throw InvalidParameter(fmt::format("unknown prompt template '{}'", id));
}

std::string render_prompt(const PromptTemplate& t, std::string_view category_name) {
  std::string out(t.pattern);
  const auto pos = out.find(kPromptPlaceholder);
  if (pos == std::string::npos) {
    throw InvalidParameter(fmt::format("template {} has no placeholder", t.id));
  }
  out.replace(pos, kPromptPlaceholder.size(), category_name);
  return out;
}

std::vector<PromptScore> compare_prompts(std::span<const TilePrediction> preds,
                                         const GroundTruthIndex& truth,
                                         BuildingCategory category,
                                         double box_threshold,
                                         const EvaluationOptions& options) {
  std::map<std::string, int> ids;
  const std::optional<BuildingCategory> stream =
      category == BuildingCategory::kOthers ? std::nullopt
                                            : std::optional<BuildingCategory>(category);
  for (const auto& p : preds) {
    for (const auto& inst : p.instances) {
      if (inst.category == stream && inst.prompt_id) ids[*inst.prompt_id] = 0;
    }
  }
  std::vector<PromptScore> out;
  for (const auto& [id, unused] : ids) {
    EvaluationOptions o = options;
    o.prompt_id = id;
    out.push_back({id, evaluate_category(preds, truth, category, box_threshold, o)});
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void append_metrics_row(std::string& out, BuildingCategory category, double threshold,
                        const CategoryMetrics& m) {
  out += fmt::format("{},{},{},{},{},{},{},{}\n", category_key(category), threshold,
                     m.counts.tp, m.counts.tn, m.counts.fp, m.counts.fn, m.pa, m.iou);
}

}  // namespace

std::string sweep_csv(std::span<const SweepResult> sweeps) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const auto& s : sweeps) {
    for (const auto& p : s.grid) append_metrics_row(out, s.category, p.threshold, p.metrics);
  }
  return out;
}

nlohmann::json sweep_json(std::span<const SweepResult> sweeps) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : sweeps) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& p : s.grid) {
      grid.push_back({{"threshold", p.threshold},
                      {"tp", p.metrics.counts.tp},
                      {"tn", p.metrics.counts.tn},
                      {"fp", p.metrics.counts.fp},
                      {"fn", p.metrics.counts.fn},
                      {"pa", p.metrics.pa},
                      {"iou", p.metrics.iou},
                      {"empty_class", p.metrics.empty_class},
                      {"instances", p.instance_count}});
    }
    arr.push_back({{"category", category_key(s.category)},
                   {"objective", objective_name(s.objective)},
                   {"best_threshold", s.best_threshold},
                   {"grid", std::move(grid)}});
  }
  return arr;
}

std::string prompt_csv(BuildingCategory category, double threshold,
                       std::span<const PromptScore> scores) {
  std::string out = "category,prompt_id,prompt,threshold,tp,tn,fp,fn,pa,iou\n";
  for (const auto& s : scores) {
    std::string rendered;
    for (const auto& t : kPromptTemplates) {
      if (t.id == s.prompt_id) rendered = render_prompt(t, category_name(category));
    }
    const auto& m = s.metrics;
    out += fmt::format("{},{},\"{}\",{},{},{},{},{},{},{}\n", category_key(category),
                       s.prompt_id, rendered, threshold, m.counts.tp, m.counts.tn,
                       m.counts.fp, m.counts.fn, m.pa, m.iou);
  }
  return out;
}

}  // namespace bipv
