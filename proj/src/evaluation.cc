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

#include "adaptfuse/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/detection.hpp"
#include "adaptfuse/error.hpp"
#include "json.hpp"

namespace adaptfuse {

bool IsHeldOutColor(const std::string& color) {
  return color == "teal" || color == "yellow";
}

const std::vector<std::string>& KnownColors() {
  static const std::vector<std::string> colors = {"white", "black", "orange",
                                                  "blue",  "teal",  "yellow"};
  return colors;
}

double Mean(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kInvalidArgument, "mean of an empty set");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double TrialMean(const Trial& trial) {
  if (trial.confidences.empty()) {
    Fail(ErrorCode::kInvalidArgument,
         "trial '" + trial.trial_id + "' has no detected frames");
  }
  return Mean(trial.confidences);
}

double StdDev(std::span<const double> values, StdMode mode) {
  const double m = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const size_t n = values.size();
  if (mode == StdMode::kSample) {
    return n < 2 ? 0.0 : std::sqrt(ss / static_cast<double>(n - 1));
  }
  return std::sqrt(ss / static_cast<double>(n));
}

double Sem(double std, size_t n) {
  if (n == 0) Fail(ErrorCode::kInvalidArgument, "SEM needs n >= 1");
  if (!(std >= 0.0)) Fail(ErrorCode::kInvalidArgument, "SEM needs std >= 0");
  return std / std::sqrt(static_cast<double>(n));
}

TrialStats Summarize(std::span<const double> values, StdMode mode) {
  TrialStats s;
  s.n = values.size();
  s.mean = Mean(values);
  s.std = StdDev(values, mode);
  s.sem = Sem(s.std, s.n);
  return s;
}

std::string ColorMean::PercentString() const { return FormatFixed(mean * 100.0, 2); }

namespace {

// Detected-trial means grouped by (model, category, color). Each group is
// one model-condition combination for a color.
using ComboKey = std::tuple<std::string, IlluminationCategory, std::string>;

std::map<ComboKey, std::vector<double>> TrialMeansByCombo(
    const std::vector<Trial>& trials) {
  std::map<ComboKey, std::vector<double>> out;
  for (const auto& t : trials) {
    if (t.confidences.empty()) continue;
    out[{t.model_id, t.category, t.color_label}].push_back(TrialMean(t));
  }
  return out;
}

}  // namespace

std::vector<ColorMean> AggregateByColor(const std::vector<Trial>& trials,
                                        std::vector<std::string>* warnings) {
  std::map<std::string, std::vector<double>> per_color;
  for (const auto& [key, means] : TrialMeansByCombo(trials)) {
    per_color[std::get<2>(key)].push_back(Mean(means));
  }
  std::vector<ColorMean> out;
  for (const auto& [color, combo_means] : per_color) {
    out.push_back({color, Mean(combo_means), combo_means.size()});
  }
  if (warnings) {
    for (const auto& color : KnownColors()) {
      if (!per_color.count(color)) {
        warnings->push_back("color '" + color + "' has no detected trials; omitted");
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const ColorMean& a, const ColorMean& b) {
    if (a.mean != b.mean) return a.mean > b.mean;
    return a.color < b.color;
  });
  return out;
}

std::vector<CellStats> AggregateByFusionCategory(const std::vector<Trial>& trials,
                                                 const Registry& registry,
                                                 StdMode mode) {
  std::map<std::pair<std::string, IlluminationCategory>, std::vector<const Trial*>> grid;
  for (const auto& t : trials) grid[{t.model_id, t.category}].push_back(&t);

  std::vector<CellStats> cells;
  for (const auto& [key, members] : grid) {
    const ModelRecord& model = registry.Get(key.first);
    CellStats cell;
    cell.model_id = key.first;
    cell.category = key.second;
    cell.rgb_percent = model.fusion_level.rgb_percent();
    cell.baseline = model.is_baseline();
    cell.trials = members.size();
    std::vector<double> means;
    for (const Trial* t : members) {
      if (!t->confidences.empty()) means.push_back(TrialMean(*t));
    }
    cell.detected_trials = means.size();
    if (means.empty()) continue;
    cell.stats = Summarize(means, mode);
    cells.push_back(cell);
  }
  if (cells.empty()) {
    Fail(ErrorCode::kInvalidArgument, "evaluation grid has no detected trials");
  }
  return cells;
}

CohortStats CohortFromCells(const std::vector<CellStats>& cells,
                            IlluminationCategory category) {
  std::vector<CohortMember> members;
  for (const auto& c : cells) {
    if (c.baseline || c.category != category) continue;
    members.push_back({c.model_id, c.rgb_percent, c.stats.mean, c.stats.std});
  }
  return CohortStats(std::move(members));
}

Delta DeltaReport(double mean_a, double mean_b) {
  Delta d;
  d.absolute = mean_a - mean_b;
  if (mean_b != 0.0) d.relative_pct = d.absolute / mean_b * 100.0;
  return d;
}

std::vector<int> QuintileTiers(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const size_t n = values.size();
  std::vector<int> tiers;
  tiers.reserve(n);
  for (double v : values) {
    const size_t below = static_cast<size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    tiers.push_back(static_cast<int>(5 * below / n) + 1);
  }
  return tiers;
}

std::vector<HeatmapRow> ExportHeatmap(const std::vector<Trial>& trials,
                                      const Registry& registry,
                                      std::vector<std::string>* warnings) {
  // (category, color, level) -> mean over that cell's detected trials.
  std::map<std::tuple<IlluminationCategory, std::string, int>, std::vector<double>> grid;
  std::set<IlluminationCategory> categories;
  std::set<std::string> colors;
  for (const auto& t : trials) {
    const ModelRecord& model = registry.Get(t.model_id);
    if (model.is_baseline()) continue;
    categories.insert(t.category);
    colors.insert(t.color_label);
    auto& bucket = grid[{t.category, t.color_label, model.fusion_level.rgb_percent()}];
    if (!t.confidences.empty()) bucket.push_back(TrialMean(t));
  }

  std::vector<HeatmapRow> rows;
  for (auto category : categories) {
    std::vector<HeatmapRow> panel;
    for (const auto& color : colors) {
      for (const auto& level : AllFusionLevels()) {
        auto it = grid.find({category, color, level.rgb_percent()});
        if (it == grid.end() || it->second.empty()) {
          if (warnings) {
            warnings->push_back(std::string("heatmap cell (") + CategoryName(category) +
                                ", " + color + ", " + level.Label() +
                                ") has no data; row omitted");
          }
          continue;
        }
        panel.push_back({category, color, level.rgb_percent(), Mean(it->second), 1});
      }
    }
    std::vector<double> values;
    for (const auto& r : panel) values.push_back(r.mean);
    const auto tiers = QuintileTiers(values);
    for (size_t i = 0; i < panel.size(); ++i) panel[i].quintile = tiers[i];
    rows.insert(rows.end(), panel.begin(), panel.end());
  }
  return rows;
}

EvaluationReport Evaluate(std::vector<Trial> trials, const Registry& registry,
                          const EvaluationOptions& options) {
  EvaluationReport report;
  report.trials = std::move(trials);
  for (const auto& t : report.trials) {
    if (t.confidences.empty()) {
      report.warnings.push_back("trial '" + t.trial_id +
                                "' has no detected frames; excluded from means");
    }
  }
  report.cells = AggregateByFusionCategory(report.trials, registry, options.std_mode);
  report.color_means = AggregateByColor(report.trials, &report.warnings);
  report.heatmap = ExportHeatmap(report.trials, registry, &report.warnings);

  for (auto category : AllCategories()) {
    const CohortStats cohort = CohortFromCells(report.cells, category);
    if (cohort.members().empty()) continue;
    auto ranked = Rank(cohort);
    for (size_t i = 1; i < ranked.size() && i < 3; ++i) {
      report.deltas.push_back({category, ranked[0].model_id, ranked[i].model_id,
                               ranked[0].mean, ranked[i].mean,
                               DeltaReport(ranked[0].mean, ranked[i].mean)});
    }
    report.rankings[category] = std::move(ranked);
  }
  return report;
}

std::vector<Trial> LoadTrials(const std::filesystem::path& logs_dir,
                              const std::filesystem::path& manifest_csv,
                              const Registry& registry) {
  const auto manifest = CsvTable::Read(
      manifest_csv, {"trial_id", "model_id", "category", "color", "held_out"});
  std::vector<Trial> trials;
  std::set<std::string> seen;
  for (size_t i = 0; i < manifest.size(); ++i) {
    const std::string where = manifest_csv.string() + ":" + std::to_string(manifest.LineOf(i));
    Trial t;
    t.trial_id = manifest.At(i, "trial_id");
    if (!seen.insert(t.trial_id).second) {
      Fail(ErrorCode::kParse, where + ": duplicate trial_id '" + t.trial_id + "'");
    }
    t.model_id = manifest.At(i, "model_id");
    if (!registry.Find(t.model_id)) {
      Fail(ErrorCode::kConfig, where + ": unknown model '" + t.model_id + "'");
    }
    t.category = ParseCategory(manifest.At(i, "category"));
    t.color_label = manifest.At(i, "color");
    const std::string& held = manifest.At(i, "held_out");
    if (held != "0" && held != "1") {
      Fail(ErrorCode::kParse, where + ": held_out must be 0 or 1");
    }
    t.held_out = held == "1";
    if (t.held_out != IsHeldOutColor(t.color_label)) {
      Fail(ErrorCode::kParse, where + ": held_out flag inconsistent with color '" +
                                  t.color_label + "'");
    }
    for (const auto& row : ReadDetectionLog(logs_dir / (t.trial_id + ".csv"))) {
      if (row.excluded || !row.detection) continue;
      t.confidences.push_back(row.detection->confidence);
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

void WriteCellStatsCsv(const std::vector<CellStats>& cells,
                       const std::filesystem::path& path) {
  CsvTable table({"model_id", "category", "fusion_rgb_percent", "baseline", "mean",
                  "std", "sem", "n", "trials", "detected_trials"});
  for (const auto& c : cells) {
    table.AddRow({c.model_id, CategoryName(c.category), std::to_string(c.rgb_percent),
                  c.baseline ? "1" : "0", FormatDouble(c.stats.mean),
                  FormatDouble(c.stats.std), FormatDouble(c.stats.sem),
                  std::to_string(c.stats.n), std::to_string(c.trials),
                  std::to_string(c.detected_trials)});
  }
  table.Write(path);
}

std::vector<CellStats> ReadCellStatsCsv(const std::filesystem::path& path) {
  const auto table = CsvTable::Read(
      path, {"model_id", "category", "fusion_rgb_percent", "mean", "std"});
  std::vector<CellStats> cells;
  for (size_t i = 0; i < table.size(); ++i) {
    CellStats c;
    c.model_id = table.At(i, "model_id");
    c.category = ParseCategory(table.At(i, "category"));
    c.rgb_percent = FusionLevel(static_cast<int>(table.Integer(i, "fusion_rgb_percent")))
                        .rgb_percent();
    c.baseline = table.HasColumn("baseline") && table.At(i, "baseline") == "1";
    c.stats.mean = table.Number(i, "mean");
    c.stats.std = table.Number(i, "std");
    if (table.HasColumn("sem")) c.stats.sem = table.Number(i, "sem");
    if (table.HasColumn("n")) c.stats.n = static_cast<size_t>(table.Integer(i, "n"));
    if (table.HasColumn("trials")) c.trials = static_cast<size_t>(table.Integer(i, "trials"));
    if (table.HasColumn("detected_trials")) {
      c.detected_trials = static_cast<size_t>(table.Integer(i, "detected_trials"));
    }
    cells.push_back(c);
  }
  return cells;
}

void WriteEvaluation(const EvaluationReport& report,
                     const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  WriteRankingsCsv(report.rankings, out_dir / "rankings.csv");
  WriteCellStatsCsv(report.cells, out_dir / "fusion_stats.csv");

  CsvTable heat({"category", "color", "fusion_rgb_percent", "mean", "quintile"});
  for (const auto& r : report.heatmap) {
    heat.AddRow({CategoryName(r.category), r.color, std::to_string(r.rgb_percent),
                 FormatDouble(r.mean), "Q" + std::to_string(r.quintile)});
  }
  heat.Write(out_dir / "heatmap.csv");

  CsvTable colors({"color", "held_out", "mean", "mean_percent", "combinations"});
  for (const auto& c : report.color_means) {
    colors.AddRow({c.color, IsHeldOutColor(c.color) ? "1" : "0", FormatDouble(c.mean),
                   c.PercentString(), std::to_string(c.cells)});
  }
  colors.Write(out_dir / "color_means.csv");

  CsvTable deltas({"category", "model_a", "model_b", "mean_a", "mean_b", "absolute",
                   "relative_pct"});
  for (const auto& d : report.deltas) {
    deltas.AddRow({CategoryName(d.category), d.model_a, d.model_b, FormatDouble(d.mean_a),
                   FormatDouble(d.mean_b), FormatDouble(d.delta.absolute),
                   d.delta.relative_pct ? FormatDouble(*d.delta.relative_pct) : "undefined"});
  }
  deltas.Write(out_dir / "deltas.csv");

  nlohmann::json summary;
  size_t detected = 0;
  for (const auto& t : report.trials) detected += t.confidences.empty() ? 0 : 1;
  summary["trials"] = report.trials.size();
  summary["detected_trials"] = detected;
  summary["cells"] = report.cells.size();
  nlohmann::json top = nlohmann::json::object();
  for (const auto& [category, list] : report.rankings) {
    if (list.empty()) continue;
    top[CategoryName(category)] = {{"model_id", list.front().model_id},
                                   {"fusion_rgb_percent", list.front().rgb_percent},
                                   {"mean", list.front().mean},
                                   {"std", list.front().std},
                                   {"composite", list.front().composite}};
  }
  summary["top_models"] = top;
  nlohmann::json color_json = nlohmann::json::array();
  for (const auto& c : report.color_means) {
    color_json.push_back({{"color", c.color}, {"mean_percent", c.PercentString()}});
  }
  summary["color_means"] = color_json;
  summary["warnings"] = report.warnings;
  WriteTextFile(out_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace adaptfuse
