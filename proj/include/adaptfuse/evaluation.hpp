// Copyright 2026 The adaptfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADAPTFUSE_EVALUATION_HPP_
#define ADAPTFUSE_EVALUATION_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptfuse/illumination.hpp"
#include "adaptfuse/registry.hpp"

namespace adaptfuse {

// Colors never seen in training; evaluated alongside the others.
bool IsHeldOutColor(const std::string& color);
const std::vector<std::string>& KnownColors();

struct Trial {
  std::string trial_id;
  std::string model_id;
  IlluminationCategory category = IlluminationCategory::kDimLight;
  std::string color_label;
  bool held_out = false;
  // Per-frame confidences retained after spurious filtering. Empty means the
  // trial produced no detections; such trials are reported, never averaged.
  std::vector<double> confidences;
};

enum class StdMode { kPopulation, kSample };

struct TrialStats {
  double mean = 0.0;
  double std = 0.0;
  double sem = 0.0;
  size_t n = 0;
};

// Arithmetic mean; throws kInvalidArgument for an empty trial.
double TrialMean(const Trial& trial);
double Mean(std::span<const double> values);
// Population (divide by n) or sample (n - 1) deviation. Sample mode with a
// single value yields 0.
double StdDev(std::span<const double> values, StdMode mode);
// std / sqrt(n); throws kInvalidArgument when n == 0 or std < 0.
double Sem(double std, size_t n);
TrialStats Summarize(std::span<const double> values, StdMode mode);

struct ColorMean {
  std::string color;
  double mean = 0.0;  // fraction
  size_t cells = 0;   // model-condition combinations averaged

  // Percent with two decimals, half away from zero.
  std::string PercentString() const;
};

// Unweighted mean over model-condition combinations of the per-combination
// mean trial confidence, per color. Sorted by descending mean, then label.
// Known colors with no trials are omitted and reported in `warnings`.
std::vector<ColorMean> AggregateByColor(const std::vector<Trial>& trials,
                                        std::vector<std::string>* warnings);

// One (model, category) cell of the evaluation grid.
struct CellStats {
  std::string model_id;
  int rgb_percent = 100;
  IlluminationCategory category = IlluminationCategory::kDimLight;
  bool baseline = false;
  TrialStats stats;
  size_t trials = 0;           // all trials in the cell
  size_t detected_trials = 0;  // trials that contributed a mean
};

// Per cell: mean of trial means across colors, their spread, and SEM with n
// equal to the number of detected color-trials. Throws kInvalidArgument when
// no trial has detections.
std::vector<CellStats> AggregateByFusionCategory(const std::vector<Trial>& trials,
                                                 const Registry& registry,
                                                 StdMode mode);

// Fine-tuned cells of one category, ready for ranking.
CohortStats CohortFromCells(const std::vector<CellStats>& cells,
                            IlluminationCategory category);

struct Delta {
  double absolute = 0.0;
  std::optional<double> relative_pct;  // unset when the reference mean is 0
};

// a - b, and (a - b) / b * 100.
Delta DeltaReport(double mean_a, double mean_b);

// Tier 1..5 per value: floor(5 * r / n) + 1 where r counts values strictly
// smaller. Equal values share a tier.
std::vector<int> QuintileTiers(std::span<const double> values);

struct HeatmapRow {
  IlluminationCategory category;
  std::string color;
  int rgb_percent = 0;
  double mean = 0.0;
  int quintile = 1;  // within the category panel
};

std::vector<HeatmapRow> ExportHeatmap(const std::vector<Trial>& trials,
                                      const Registry& registry,
                                      std::vector<std::string>* warnings);

struct DeltaRow {
  IlluminationCategory category;
  std::string model_a;
  std::string model_b;
  double mean_a = 0.0;
  double mean_b = 0.0;
  Delta delta;
};

struct EvaluationOptions {
  StdMode std_mode = StdMode::kPopulation;
};

struct EvaluationReport {
  std::vector<Trial> trials;
  std::vector<CellStats> cells;
  std::vector<ColorMean> color_means;
  std::vector<HeatmapRow> heatmap;
  Rankings rankings;
  std::vector<DeltaRow> deltas;  // rank 1 versus ranks 2 and 3, per category
  std::vector<std::string> warnings;
};

EvaluationReport Evaluate(std::vector<Trial> trials, const Registry& registry,
                          const EvaluationOptions& options);

// Trial manifest (trial_id,model_id,category,color,held_out) plus one
// detection log per trial at <logs_dir>/<trial_id>.csv.
std::vector<Trial> LoadTrials(const std::filesystem::path& logs_dir,
                              const std::filesystem::path& manifest_csv,
                              const Registry& registry);

// rankings.csv, fusion_stats.csv, heatmap.csv, color_means.csv, deltas.csv,
// summary.json.
void WriteEvaluation(const EvaluationReport& report,
                     const std::filesystem::path& out_dir);

// fusion_stats.csv columns.
void WriteCellStatsCsv(const std::vector<CellStats>& cells,
                       const std::filesystem::path& path);
std::vector<CellStats> ReadCellStatsCsv(const std::filesystem::path& path);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_EVALUATION_HPP_
