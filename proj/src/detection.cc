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

#include "adaptfuse/detection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "adaptfuse/csv.hpp"

namespace adaptfuse {

namespace {

bool InUnit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void ValidateBBox(const BBox& box, ErrorCode code, const std::string& context) {
  if (!InUnit(box.cx) || !InUnit(box.cy) || !InUnit(box.w) || !InUnit(box.h)) {
    Fail(code, context + ": bbox values must lie in [0, 1], got (" +
                   FormatDouble(box.cx) + ", " + FormatDouble(box.cy) + ", " +
                   FormatDouble(box.w) + ", " + FormatDouble(box.h) + ")");
  }
  if (!(box.w > 0.0) || !(box.h > 0.0)) {
    Fail(code, context + ": bbox has zero area inside the unit square");
  }
}

void ValidateDetection(const Detection& d, ErrorCode code,
                       const std::string& context) {
  if (d.class_id < 0) Fail(code, context + ": negative class_id");
  if (!InUnit(d.confidence)) {
    Fail(code, context + ": confidence " + FormatDouble(d.confidence) +
                   " outside [0, 1]");
  }
  ValidateBBox(d.bbox, code, context);
}

double IoU(const BBox& a, const BBox& b) {
  const double ax0 = a.cx - a.w / 2, ax1 = a.cx + a.w / 2;
  const double ay0 = a.cy - a.h / 2, ay1 = a.cy + a.h / 2;
  const double bx0 = b.cx - b.w / 2, bx1 = b.cx + b.w / 2;
  const double by0 = b.cy - b.h / 2, by1 = b.cy + b.h / 2;
  const double iw = std::max(0.0, std::min(ax1, bx1) - std::max(ax0, bx0));
  const double ih = std::max(0.0, std::min(ay1, by1) - std::max(ay0, by0));
  const double inter = iw * ih;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double CenterDistance(const BBox& a, const BBox& b) {
  return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

std::optional<Detection> DetectionResult::Best() const {
  std::optional<Detection> best;
  for (const auto& d : detections) {
    if (!best || d.confidence > best->confidence) best = d;
  }
  return best;
}

void MockConfidenceTable::Set(int rgb_percent, IlluminationCategory category,
                              const std::string& color, double confidence) {
  FusionLevel level(rgb_percent);
  if (!InUnit(confidence)) {
    Fail(ErrorCode::kFixture, "mock confidence must lie in [0, 1]");
  }
  entries_[{level.rgb_percent(), category, color}] = confidence;
}

std::optional<double> MockConfidenceTable::Lookup(int rgb_percent,
                                                  IlluminationCategory category,
                                                  const std::string& color) const {
  auto it = entries_.find({rgb_percent, category, color});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

MockConfidenceTable MockConfidenceTable::ReadCsv(const std::filesystem::path& path) {
  const auto table = CsvTable::Read(
      path, {"fusion_rgb_percent", "category", "color", "confidence"});
  MockConfidenceTable out;
  for (size_t i = 0; i < table.size(); ++i) {
    out.Set(static_cast<int>(table.Integer(i, "fusion_rgb_percent")),
            ParseCategory(table.At(i, "category")), table.At(i, "color"),
            table.Number(i, "confidence"));
  }
  return out;
}

void MockConfidenceTable::WriteCsv(const std::filesystem::path& path) const {
  CsvTable table({"fusion_rgb_percent", "category", "color", "confidence"});
  for (const auto& [key, value] : entries_) {
    const auto& [p, c, color] = key;
    table.AddRow({std::to_string(p), CategoryName(c), color, FormatDouble(value)});
  }
  table.Write(path);
}

DetectionResult MockDetect(const Frame& frame, const ModelRecord& model,
                           const FrameContext& context,
                           const MockConfidenceTable& table,
                           const MockOptions& options) {
  (void)frame;
  DetectionResult result;
  result.frame_id = context.frame_id;
  result.model_id = model.model_id;
  result.timestamp_ms = context.timestamp_ms;
  result.inference_latency_ms = options.latency_ms;
  if (!context.truth) return result;

  // Baselines are not tied to a category; they are looked up under the
  // category of the scene they are evaluated in.
  const auto category = model.category ? model.category : context.scene_category;
  if (!category) {
    Fail(ErrorCode::kFixture, "mock lookup for baseline '" + model.model_id +
                                  "' needs a scene category");
  }
  const auto value =
      table.Lookup(model.fusion_level.rgb_percent(), *category, context.color_label);
  if (!value) {
    Fail(ErrorCode::kFixture,
         "mock table has no entry for (" +
             std::to_string(model.fusion_level.rgb_percent()) + ", " +
             CategoryName(*category) + ", " + context.color_label + ")");
  }
  double confidence = *value;
  if (options.noise_sigma > 0.0) {
    const uint64_t seed = StableHash64(
        model.model_id, StableHash64(context.frame_id, options.seed));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, options.noise_sigma);
    confidence = std::clamp(confidence + noise(rng), 0.0, 1.0);
  }
  result.detections.push_back({kMugClassId, confidence, *context.truth});
  return result;
}

MockDetector::MockDetector(Registry registry, MockConfidenceTable table,
                           MockOptions options)
    : registry_(std::move(registry)),
      table_(std::move(table)),
      options_(options) {}

DetectionResult MockDetector::Detect(const Frame& frame,
                                     const std::string& model_id,
                                     const FrameContext& context) {
  const ModelRecord* model = registry_.Find(model_id);
  if (!model) {
    Fail(ErrorCode::kUnknownModel, "mock detector has no model '" + model_id + "'");
  }
  return MockDetect(frame, *model, context, table_, options_);
}

namespace {

const std::vector<std::string>& DetectionLogColumns() {
  static const std::vector<std::string> columns = {
      "frame_id", "timestamp_ms", "model_id", "class_id", "confidence", "cx",
      "cy", "w", "h", "excluded", "exclusion_rule"};
  return columns;
}

}  // namespace

std::string DetectionLogCsv(const std::vector<DetectionLogRow>& rows) {
  CsvTable table(DetectionLogColumns());
  for (const auto& r : rows) {
    if (r.detection) {
      const auto& d = *r.detection;
      table.AddRow({r.frame_id, std::to_string(r.timestamp_ms), r.model_id,
                    std::to_string(d.class_id), FormatDouble(d.confidence),
                    FormatDouble(d.bbox.cx), FormatDouble(d.bbox.cy),
                    FormatDouble(d.bbox.w), FormatDouble(d.bbox.h),
                    r.excluded ? "1" : "0", r.exclusion_rule});
    } else {
      table.AddRow({r.frame_id, std::to_string(r.timestamp_ms), r.model_id, "",
                    "", "", "", "", "", r.excluded ? "1" : "0",
                    r.exclusion_rule});
    }
  }
  return table.ToString();
}

void WriteDetectionLog(const std::vector<DetectionLogRow>& rows,
                       const std::filesystem::path& path) {
  WriteTextFile(path, DetectionLogCsv(rows));
}

std::vector<DetectionLogRow> ReadDetectionLog(const std::filesystem::path& path) {
  const auto table = CsvTable::Read(path, DetectionLogColumns());
  std::vector<DetectionLogRow> rows;
  rows.reserve(table.size());
  for (size_t i = 0; i < table.size(); ++i) {
    DetectionLogRow r;
    r.frame_id = table.At(i, "frame_id");
    r.timestamp_ms = table.Integer(i, "timestamp_ms");
    r.model_id = table.At(i, "model_id");
    if (!table.At(i, "confidence").empty()) {
      Detection d;
      d.class_id = static_cast<int>(table.Integer(i, "class_id"));
      d.confidence = table.Number(i, "confidence");
      d.bbox = {table.Number(i, "cx"), table.Number(i, "cy"),
                table.Number(i, "w"), table.Number(i, "h")};
      ValidateDetection(d, ErrorCode::kParse,
                        path.string() + ":" + std::to_string(table.LineOf(i)));
      r.detection = d;
    }
    const std::string& excluded = table.At(i, "excluded");
    if (excluded != "0" && excluded != "1") {
      Fail(ErrorCode::kParse, path.string() + ":" +
                                  std::to_string(table.LineOf(i)) +
                                  ": excluded must be 0 or 1");
    }
    r.excluded = excluded == "1";
    r.exclusion_rule = table.At(i, "exclusion_rule");
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace adaptfuse
