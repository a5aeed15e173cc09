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

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bipv/mask.hpp"
#include "bipv/types.hpp"

namespace bipv {

// Pixel-level binary confusion counts. Forms a commutative monoid under +,
// which is how per-tile counts are micro-aggregated.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + tn + fp + fn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) {
    return a += b;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const RleMask& pred, const RleMask& truth);

// (tp + tn) / total. Throws ComputationError when total == 0.
double pixel_accuracy(const ConfusionCounts& c);

struct IouValue {
  double value = 0.0;
  // Both prediction and truth empty; value is 1 by convention.
  bool empty_class = false;
};

// tp / (tp + fp + fn).
IouValue iou(const ConfusionCounts& c);

struct CategoryMetrics {
  BuildingCategory category = BuildingCategory::kApartment;
  double pa = 0.0;
  double iou = 0.0;
  bool empty_class = false;
  ConfusionCounts counts;
};

CategoryMetrics metrics_from_counts(BuildingCategory category, const ConfusionCounts& c);

// Ground truth looked up by tile id; every prediction needs a match.
class GroundTruthIndex {
 public:
  explicit GroundTruthIndex(std::span<const GroundTruthMap> maps);
  const GroundTruthMap& at(const std::string& tile_id) const;
  const GroundTruthMap* find(const std::string& tile_id) const;

 private:
  std::vector<const GroundTruthMap*> sorted_;
};

struct EvaluationOptions {
  // Restrict the predicted stream to one prompt (prompt ablation).
  std::optional<std::string> prompt_id;
  int jobs = 1;
};

// Micro-aggregated binary metrics for one category over the labeled tiles.
// Throws MissingInputError naming a predicted tile without ground truth.
CategoryMetrics evaluate_category(std::span<const TilePrediction> preds,
                                  const GroundTruthIndex& truth,
                                  BuildingCategory category, double box_threshold,
                                  const EvaluationOptions& options = {});

enum class Objective { kPixelAccuracy, kIou };

std::string_view objective_name(Objective o);
Objective parse_objective(std::string_view text);

struct SweepPoint {
  double threshold = 0.0;
  CategoryMetrics metrics;
  // Instances of the category surviving the threshold, summed over tiles.
  std::int64_t instance_count = 0;
};

struct SweepResult {
  BuildingCategory category = BuildingCategory::kApartment;
  Objective objective = Objective::kPixelAccuracy;
  std::vector<SweepPoint> grid;
  double best_threshold = 0.0;

  double objective_at(std::size_t i) const;
  const SweepPoint& best() const;
};

// 0.05, 0.10, ..., 0.60.
std::vector<double> default_threshold_grid();

// Evaluates every grid point; the best threshold maximises the objective, ties
// going to the smallest threshold.
SweepResult threshold_sweep(std::span<const TilePrediction> preds,
                            const GroundTruthIndex& truth, BuildingCategory category,
                            std::span<const double> grid, Objective objective,
                            const EvaluationOptions& options = {});

// ---------------------------------------------------------------------------
// Text prompts.

struct PromptTemplate {
  std::string_view id;
  std::string_view pattern;
};

inline constexpr std::string_view kPromptPlaceholder = "[building class]";

inline constexpr std::array<PromptTemplate, 6> kPromptTemplates = {{
    {"TP1", "[building class]"},
    {"TP2", "[building class] from satellite"},
    {"TP3", "Roofs of [building class]"},
    {"TP4", "Roofs of [building class] from satellite"},
    {"TP5", "Overhead shot of the [building class]"},
    {"TP6", "Many [building class] from satellite"},
}};

const PromptTemplate& prompt_template(std::string_view id);
std::string render_prompt(const PromptTemplate& t, std::string_view category_name);

struct PromptScore {
  std::string prompt_id;
  CategoryMetrics metrics;
};

// IoU/PA per prompt id present in the predictions for `category`, sorted by
// prompt id. Instances without a prompt id are ignored.
std::vector<PromptScore> compare_prompts(std::span<const TilePrediction> preds,
                                         const GroundTruthIndex& truth,
                                         BuildingCategory category,
                                         double box_threshold,
                                         const EvaluationOptions& options = {});

// ---------------------------------------------------------------------------
// Output tables.

inline constexpr std::string_view kSweepCsvHeader =
    "category,threshold,tp,tn,fp,fn,pa,iou";

std::string sweep_csv(std::span<const SweepResult> sweeps);
nlohmann::json sweep_json(std::span<const SweepResult> sweeps);
std::string prompt_csv(BuildingCategory category, double threshold,
                       std::span<const PromptScore> scores);

}  // namespace bipv
