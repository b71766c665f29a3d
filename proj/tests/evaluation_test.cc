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
#include <random>
#include <string>
#include <vector>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/detection.hpp"
#include "adaptfuse/error.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace adaptfuse {
namespace {

using testing::TempDir;

Trial MakeTrial(const std::string& id, const std::string& model, IlluminationCategory cat,
                const std::string& color, std::vector<double> conf) {
  Trial t;
  t.trial_id = id;
  t.model_id = model;
  t.category = cat;
  t.color_label = color;
  t.held_out = IsHeldOutColor(color);
  t.confidences = std::move(conf);
  return t;
}

// Two-pass textbook formulas, written independently of the library.
double OracleStd(const std::vector<double>& v, bool sample) {
  long double sum = 0;
  for (double x : v) sum += x;
  const long double m = sum / v.size();
  long double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  const long double denom = sample ? v.size() - 1 : v.size();
  return static_cast<double>(std::sqrt(ss / denom));
}

TEST(StatsTest, SemExamples) {
  EXPECT_DOUBLE_EQ(Sem(0.06, 9), 0.02);
  EXPECT_DOUBLE_EQ(Sem(0.0, 6), 0.0);
  EXPECT_DOUBLE_EQ(Sem(0.5, 1), 0.5);
  EXPECT_THROW(Sem(0.1, 0), Error);
  EXPECT_THROW(Sem(-0.1, 3), Error);
}

TEST(StatsTest, SummarizeMatchesOracle) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(2 + t % 9);
    for (auto& x : v) x = u(rng);
    for (bool sample : {false, true}) {
      const auto s = Summarize(v, sample ? StdMode::kSample : StdMode::kPopulation);
      const double std = OracleStd(v, sample);
      EXPECT_NEAR(s.std, std, 1e-12);
      EXPECT_NEAR(s.sem, std / std::sqrt(static_cast<double>(v.size())), 1e-12);
      EXPECT_EQ(s.n, v.size());
    }
  }
  const std::vector<double> one = {0.7};
  EXPECT_EQ(StdDev(one, StdMode::kSample), 0.0);
  EXPECT_THROW(Mean(std::vector<double>{}), Error);
}

TEST(StatsTest, TrialMeanRequiresDetections) {
  EXPECT_DOUBLE_EQ(TrialMean(MakeTrial("t", "dim_f90", IlluminationCategory::kDimLight,
                                       "white", {0.5, 0.7, 0.9})),
                   0.7);
  EXPECT_THROW(
      TrialMean(MakeTrial("t", "dim_f90", IlluminationCategory::kDimLight, "white", {})),
      Error);
}

TEST(DeltaTest, DimLightReportedDeltas) {
  const auto a = DeltaReport(0.9203, 0.9000);
  EXPECT_NEAR(a.absolute, 0.0203, 1e-12);
  ASSERT_TRUE(a.relative_pct);
  EXPECT_NEAR(*a.relative_pct, 2.2556, 5e-5);
  EXPECT_EQ(FormatFixed(*a.relative_pct, 2), "2.26");

  const auto b = DeltaReport(0.9203, 0.8543);
  EXPECT_NEAR(b.absolute, 0.0660, 1e-12);
  EXPECT_NEAR(*b.relative_pct, 7.7256, 5e-5);
  EXPECT_EQ(FormatFixed(*b.relative_pct, 2), "7.73");

  EXPECT_FALSE(DeltaReport(0.5, 0.0).relative_pct);
}

TEST(QuintileTest, DistinctValuesFillTiersEvenly) {
  std::vector<double> v(25);
  for (int i = 0; i < 25; ++i) v[i] = (i * 7 % 25) / 25.0;
  const auto tiers = QuintileTiers(v);
  std::map<int, int> counts;
  for (int t : tiers) ++counts[t];
  for (int q = 1; q <= 5; ++q) EXPECT_EQ(counts[q], 5) << q;
}

TEST(QuintileTest, TiersAreMonotoneAndTiesShareATier) {
  std::mt19937 rng(8);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(1 + t % 40);
    for (auto& x : v) x = static_cast<double>(rng() % 10);
    const auto tiers = QuintileTiers(v);
    for (size_t i = 0; i < v.size(); ++i) {
      ASSERT_GE(tiers[i], 1);
      ASSERT_LE(tiers[i], 5);
      for (size_t j = 0; j < v.size(); ++j) {
        if (v[i] == v[j]) {
          ASSERT_EQ(tiers[i], tiers[j]);
        }
        if (v[i] < v[j]) {
          ASSERT_LE(tiers[i], tiers[j]);
        }
      }
    }
  }
}

TEST(ColorTest, ReproducesTheColorTable) {
  const std::vector<std::pair<std::string, double>> table = {
      {"white", 0.7098}, {"teal", 0.6875},  {"yellow", 0.6607},
      {"orange", 0.6322}, {"blue", 0.6321}, {"black", 0.6113}};
  std::vector<Trial> trials;
  int id = 0;
  for (const auto& [color, mean] : table) {
    // Two combinations at mean +/- 0.05 and trials spread symmetrically.
    for (const auto& [model, offset] :
         std::vector<std::pair<std::string, double>>{{"dim_f90", 0.05}, {"dim_f80", -0.05}}) {
      const double m = mean + offset;
      trials.push_back(MakeTrial("t" + std::to_string(id++), model,
                                 IlluminationCategory::kDimLight, color,
                                 {m - 0.01, m + 0.01}));
      trials.push_back(MakeTrial("t" + std::to_string(id++), model,
                                 IlluminationCategory::kDimLight, color, {m}));
    }
  }
  std::vector<std::string> warnings;
  const auto means = AggregateByColor(trials, &warnings);
  EXPECT_TRUE(warnings.empty());
  ASSERT_EQ(means.size(), table.size());
  for (size_t i = 0; i < table.size(); ++i) {
    EXPECT_EQ(means[i].color, table[i].first);
    EXPECT_NEAR(means[i].mean, table[i].second, 1e-12);
    EXPECT_EQ(means[i].cells, 2u);
  }
  EXPECT_EQ(means[0].PercentString(), "70.98");
  EXPECT_EQ(means.back().PercentString(), "61.13");
}

TEST(ColorTest, ColorsWithoutDetectionsAreOmittedWithAWarning) {
  std::vector<Trial> trials = {
      MakeTrial("a", "dim_f90", IlluminationCategory::kDimLight, "white", {0.8}),
      MakeTrial("b", "dim_f90", IlluminationCategory::kDimLight, "black", {})};
  std::vector<std::string> warnings;
  const auto means = AggregateByColor(trials, &warnings);
  ASSERT_EQ(means.size(), 1u);
  EXPECT_EQ(warnings.size(), KnownColors().size() - 1);
}

std::vector<Trial> DimGrid() {
  std::vector<Trial> trials;
  const std::map<std::string, std::vector<double>> per_model = {
      {"dim_f90", {0.90, 0.94}}, {"dim_f80", {0.86, 0.94}}, {"dim_f70", {0.80, 0.90}},
      {"yolov11n_coco", {0.70, 0.74}}};
  int id = 0;
  for (const auto& [model, means] : per_model) {
    for (double m : means) {
      trials.push_back(MakeTrial("t" + std::to_string(id++), model,
                                 IlluminationCategory::kDimLight, "white", {m}));
    }
  }
  trials.push_back(MakeTrial("empty", "dim_f90", IlluminationCategory::kDimLight, "white", {}));
  return trials;
}

TEST(AggregateTest, CellsSummarizeTrialMeans) {
  const auto cells =
      AggregateByFusionCategory(DimGrid(), Registry::Default(), StdMode::kPopulation);
  ASSERT_EQ(cells.size(), 4u);
  const auto it = std::find_if(cells.begin(), cells.end(),
                               [](const CellStats& c) { return c.model_id == "dim_f90"; });
  ASSERT_NE(it, cells.end());
  EXPECT_NEAR(it->stats.mean, 0.92, 1e-12);
  EXPECT_NEAR(it->stats.std, 0.02, 1e-12);
  EXPECT_NEAR(it->stats.sem, 0.02 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(it->trials, 3u);
  EXPECT_EQ(it->detected_trials, 2u);
  EXPECT_EQ(it->rgb_percent, 90);
  const auto cohort = CohortFromCells(cells, IlluminationCategory::kDimLight);
  EXPECT_EQ(cohort.members().size(), 3u);
  EXPECT_THROW(AggregateByFusionCategory({}, Registry::Default(), StdMode::kPopulation),
               Error);
}

TEST(EvaluateTest, RanksAndReportsDeltasAgainstRunnersUp) {
  const auto report = Evaluate(DimGrid(), Registry::Default(), {});
  const auto& dim = report.rankings.at(IlluminationCategory::kDimLight);
  ASSERT_EQ(dim.size(), 3u);
  EXPECT_EQ(dim[0].model_id, "dim_f90");
  ASSERT_EQ(report.deltas.size(), 2u);
  EXPECT_EQ(report.deltas[0].model_a, "dim_f90");
  EXPECT_NEAR(report.deltas[0].mean_a, 0.92, 1e-12);
  EXPECT_EQ(report.warnings.front(), "trial 'empty' has no detected frames; excluded from means");

  TempDir dir;
  WriteEvaluation(report, dir.path());
  for (const char* f : {"rankings.csv", "fusion_stats.csv", "heatmap.csv", "color_means.csv",
                        "deltas.csv", "summary.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto cells = ReadCellStatsCsv(dir / "fusion_stats.csv");
  ASSERT_EQ(cells.size(), report.cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    EXPECT_EQ(cells[i].model_id, report.cells[i].model_id);
    EXPECT_EQ(cells[i].stats.mean, report.cells[i].stats.mean);
    EXPECT_EQ(cells[i].stats.std, report.cells[i].stats.std);
    EXPECT_EQ(cells[i].baseline, report.cells[i].baseline);
  }
}

TEST(HeatmapTest, OneRowPerObservedCellWithQuintiles) {
  std::vector<Trial> trials;
  int id = 0;
  for (const auto& level : AllFusionLevels()) {
    const std::string model = FineTunedModelId(IlluminationCategory::kNoLight, level);
    trials.push_back(MakeTrial("t" + std::to_string(id++), model,
                               IlluminationCategory::kNoLight, "white",
                               {0.3 + level.rgb_percent() / 1000.0}));
  }
  std::vector<std::string> warnings;
  const auto rows = ExportHeatmap(trials, Registry::Default(), &warnings);
  EXPECT_EQ(rows.size(), 11u);
  EXPECT_TRUE(warnings.empty());
  // Rows run from pure RGB to pure LWIR; confidence falls along that order.
  for (size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].quintile, rows[i - 1].quintile);
  EXPECT_EQ(rows.front().quintile, 5);
  EXPECT_EQ(rows.back().quintile, 1);
}

TEST(LoadTrialsTest, ReadsManifestAndDropsExcludedRows) {
  TempDir dir;
  WriteTextFile(dir / "manifest.csv",
                "trial_id,model_id,category,color,held_out\n"
                "a,dim_f90,dim_light,white,0\n"
                "b,dim_f90,dim_light,teal,1\n");
  DetectionLogRow kept{"f0", 0, "dim_f90", Detection{0, 0.9, {0.5, 0.5, 0.2, 0.2}}, false, ""};
  DetectionLogRow dropped{"f1", 100, "dim_f90", Detection{0, 0.1, {0.5, 0.5, 0.2, 0.2}},
                          true, "confidence_floor"};
  DetectionLogRow nothing{"f2", 200, "dim_f90", std::nullopt, false, ""};
  std::filesystem::create_directories(dir / "logs");
  WriteDetectionLog({kept, dropped, nothing}, dir / "logs" / "a.csv");
  WriteDetectionLog({nothing}, dir / "logs" / "b.csv");
  const auto trials = LoadTrials(dir / "logs", dir / "manifest.csv", Registry::Default());
  ASSERT_EQ(trials.size(), 2u);
  EXPECT_EQ(trials[0].confidences, std::vector<double>{0.9});
  EXPECT_TRUE(trials[1].confidences.empty());
  EXPECT_TRUE(trials[1].held_out);

  WriteTextFile(dir / "bad.csv",
                "trial_id,model_id,category,color,held_out\n"
                "a,dim_f90,dim_light,white,1\n");
  EXPECT_THROW(LoadTrials(dir / "logs", dir / "bad.csv", Registry::Default()), Error);
  WriteTextFile(dir / "unknown.csv",
                "trial_id,model_id,category,color,held_out\n"
                "a,dim_f95,dim_light,white,0\n");
  EXPECT_THROW(LoadTrials(dir / "logs", dir / "unknown.csv", Registry::Default()), Error);
}

}  // namespace
}  // namespace adaptfuse
