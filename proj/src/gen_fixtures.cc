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

#include "adaptfuse/gen_fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <vector>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/dataset.hpp"
#include "adaptfuse/error.hpp"
#include "adaptfuse/evaluation.hpp"
#include "adaptfuse/fixtures.hpp"
#include "adaptfuse/image_io.hpp"
#include "adaptfuse/registry.hpp"

namespace adaptfuse {

namespace fs = std::filesystem;

namespace {

// Index i holds the value at rgb_percent 10 * i.
using LevelCurve = std::array<double, 11>;

const LevelCurve& CurveFor(IlluminationCategory category) {
  static const LevelCurve full = {0.62,   0.70,   0.76, 0.81, 0.85, 0.88,
                                  0.9050, 0.9180, 0.9283, 0.9150, 0.8950};
  static const LevelCurve dim = {0.58,   0.66,   0.73, 0.78, 0.81, 0.8300,
                                 0.8450, 0.8543, 0.9000, 0.9203, 0.8800};
  static const LevelCurve no = {0.541,  0.6000, 0.6500, 0.6900, 0.7103, 0.7227,
                                0.6800, 0.6200, 0.5500, 0.4700, 0.384};
  switch (category) {
    case IlluminationCategory::kFullLight:
      return full;
    case IlluminationCategory::kDimLight:
      return dim;
    case IlluminationCategory::kNoLight:
      break;
  }
  return no;
}

double ColorOffset(const std::string& color) {
  static const std::map<std::string, double> offsets = {
      {"white", 0.0},    {"teal", -0.010},  {"yellow", -0.020},
      {"orange", -0.030}, {"blue", -0.031}, {"black", -0.040},
  };
  auto it = offsets.find(color);
  return it == offsets.end() ? -0.05 : it->second;
}

// Color sensitivity grows with distance from the category's best level. The
// no-light 50/50 model is the least consistent one.
double ColorSpread(FusionLevel level, IlluminationCategory category) {
  int best = 40;
  if (category == IlluminationCategory::kFullLight) best = 80;
  if (category == IlluminationCategory::kDimLight) best = 90;
  if (category == IlluminationCategory::kNoLight && level.rgb_percent() == 50) return 3.0;
  return 1.0 + std::abs(level.rgb_percent() - best) / 20.0;
}

struct Recording {
  std::string id;
  std::string color;
  // Lux as a function of the frame's position in [0, 1).
  double (*lux)(double);
};

double DimLux(double) { return 500.0; }
double FullLux(double) { return 1500.0; }
double NoLux(double) { return 5.0; }
double RampLux(double u) {
  if (u < 1.0 / 3.0) return 2000.0;
  if (u < 2.0 / 3.0) return 500.0;
  return 5.0;
}

// Visible-band brightness multiplier for a lux level.
double VisibleGain(double lux) {
  return std::clamp(std::log10(lux + 1.0) / 3.0, 0.05, 1.0);
}

uint8_t Scale(uint8_t v, double g) {
  return static_cast<uint8_t>(std::lround(std::clamp(v * g, 0.0, 255.0)));
}

size_t WriteRecording(const fs::path& root, const Recording& rec, const FixtureOptions& o) {
  const int n = static_cast<int>(std::lround(o.duration_s * o.fps));
  const fs::path dir = root / "dataset" / rec.id;
  CsvTable meta({"frame", "timestamp_ms", "lux", "color_label"});
  std::vector<LuxReading> trace;
  const int radius = std::max(2, o.width / 10);
  const int swing = std::max(0, o.width / 2 - radius - 2);
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / n;
    const double lux = rec.lux(u);
    const int64_t ts = static_cast<int64_t>(i) * 1000 / o.fps;
    const double g = VisibleGain(lux);
    SceneSpec spec;
    spec.width = o.width;
    spec.height = o.height;
    spec.radius = radius;
    spec.center_x = o.width / 2 +
                    static_cast<int>(std::lround(swing * 0.5 * std::sin(2.0 * std::numbers::pi * u)));
    spec.center_y = o.height / 2;
    spec.rgb_background = {Scale(96, g), Scale(96, g), Scale(96, g)};
    spec.target_rgb = {Scale(240, g), Scale(240, g), Scale(240, g)};
    spec.timestamp_ms = ts;
    const auto [rgb, lwir] = GenerateSyntheticPair(spec);

    char name[16];
    std::snprintf(name, sizeof(name), "%06d", i);
    WritePng(rgb, dir / "rgb" / (std::string(name) + ".png"));
    WritePng(lwir, dir / "lwir" / (std::string(name) + ".png"));
    Annotation a;
    a.bbox = {(spec.center_x + 0.5) / o.width, (spec.center_y + 0.5) / o.height,
              (2.0 * radius + 1.0) / o.width, (2.0 * radius + 1.0) / o.height};
    WriteAnnotations({a}, dir / "labels" / (std::string(name) + ".txt"));
    meta.AddRow({name, std::to_string(ts), FormatDouble(lux), rec.color});
    trace.push_back({lux, ts});
  }
  meta.Write(dir / "meta.csv");
  WriteLuxTrace(trace, root / "lux" / (rec.id + ".csv"));
  return static_cast<size_t>(n);
}

size_t WriteTrials(const fs::path& root, const Registry& registry,
                   const MockConfidenceTable& table, const FixtureOptions& o) {
  CsvTable manifest({"trial_id", "model_id", "category", "color", "held_out"});
  MockOptions mock{o.trial_noise_sigma, o.seed, 0.0};
  const Frame blank(1, 1, Modality::kFused, Rgb8{0, 0, 0});
  const BBox truth{0.5, 0.5, 0.2, 0.2};
  size_t trials = 0;
  for (const auto& model : registry.records()) {
    std::vector<IlluminationCategory> categories;
    if (model.category) {
      categories.push_back(*model.category);
    } else {
      categories = AllCategories();
    }
    for (IlluminationCategory category : categories) {
      for (const auto& color : KnownColors()) {
        const std::string trial_id =
            model.model_id + "__" + CategoryName(category) + "__" + color;
        std::vector<DetectionLogRow> rows;
        SpuriousFilter filter{SpuriousPolicy{}};
        for (int i = 0; i < o.frames_per_trial; ++i) {
          FrameContext ctx;
          ctx.frame_id = trial_id + "/" + std::to_string(i);
          ctx.timestamp_ms = static_cast<int64_t>(i) * 1000 / o.fps;
          ctx.scene_category = category;
          ctx.color_label = color;
          ctx.truth = truth;
          const DetectionResult r = MockDetect(blank, model, ctx, table, mock);
          DetectionLogRow row{ctx.frame_id, ctx.timestamp_ms, model.model_id, r.Best(),
                              false, ""};
          if (auto ex = filter.Check(r)) {
            row.excluded = true;
            row.exclusion_rule = ExclusionRuleName(ex->first);
          }
          rows.push_back(std::move(row));
        }
        WriteDetectionLog(rows, root / "trials" / "logs" / (trial_id + ".csv"));
        manifest.AddRow({trial_id, model.model_id, CategoryName(category), color,
                         IsHeldOutColor(color) ? "1" : "0"});
        ++trials;
      }
    }
  }
  manifest.Write(root / "trials" / "manifest.csv");
  return trials;
}

std::string ConfigText(const FixtureOptions& o) {
  return "# Generated fixture configuration. Paths are relative to this file.\n"
         "[models]\n"
         "registry = registry.json\n"
         "full_light = full_f80\n"
         "dim_light = dim_f90\n"
         "no_light = no_f40\n"
         "\n"
         "[detector]\n"
         "backend = mock\n"
         "mock_table = mock_table.csv\n"
         "noise_sigma = 0\n"
         "seed = " + std::to_string(o.seed) + "\n"
         "\n"
         "[pipeline]\n"
         "trial_duration_s = " + FormatDouble(o.duration_s) + "\n";
}

}  // namespace

double FixtureConfidence(FusionLevel level, IlluminationCategory category,
                         const std::string& color) {
  const double base = CurveFor(category)[static_cast<size_t>(level.rgb_percent() / 10)];
  return std::clamp(base + ColorOffset(color) * ColorSpread(level, category), 0.0, 1.0);
}

MockConfidenceTable FixtureMockTable() {
  MockConfidenceTable table;
  for (IlluminationCategory category : AllCategories()) {
    for (FusionLevel level : AllFusionLevels()) {
      for (const auto& color : KnownColors()) {
        table.Set(level.rgb_percent(), category, color,
                  FixtureConfidence(level, category, color));
      }
    }
  }
  return table;
}

FixtureSummary GenerateFixtures(const fs::path& out, const FixtureOptions& o) {
  if (o.width < 16 || o.height < 16) Fail(ErrorCode::kFixture, "fixture frames must be at least 16x16");
  if (o.fps <= 0 || !(o.duration_s > 0.0)) {
    Fail(ErrorCode::kFixture, "fixture fps and duration must be positive");
  }
  if (o.frames_per_trial <= 0) Fail(ErrorCode::kFixture, "frames_per_trial must be positive");
  if (o.trial_noise_sigma < 0.0) Fail(ErrorCode::kFixture, "trial noise must be >= 0");

  static const Recording kRecordings[] = {
      {"dim_white", "white", &DimLux},
      {"full_white", "white", &FullLux},
      {"no_white", "white", &NoLux},
      {"ramp_white", "white", &RampLux},
  };
  FixtureSummary summary;
  for (const auto& rec : kRecordings) {
    summary.frames += WriteRecording(out, rec, o);
    ++summary.recordings;
  }
  const IngestReport ingest = Ingest(out / "dataset");
  if (!ingest.errors.empty()) Fail(ErrorCode::kFixture, ingest.errors.front());
  WriteManifest(ingest.manifest, out / "manifest.csv");
  const MockConfidenceTable table = FixtureMockTable();
  table.WriteCsv(out / "mock_table.csv");
  summary.mock_entries = table.size();
  const Registry registry = Registry::Default();
  registry.SaveJson(out / "registry.json");
  summary.trials = WriteTrials(out, registry, table, o);
  WriteTextFile(out / "adaptfuse.ini", ConfigText(o));
  return summary;
}

}  // namespace adaptfuse
