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

#ifndef ADAPTFUSE_DETECTION_HPP_
#define ADAPTFUSE_DETECTION_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "adaptfuse/error.hpp"
#include "adaptfuse/frame.hpp"
#include "adaptfuse/illumination.hpp"
#include "adaptfuse/registry.hpp"

namespace adaptfuse {

inline constexpr int kMugClassId = 0;

// Normalized (cx, cy, w, h) box; all four values in [0, 1].
struct BBox {
  double cx = 0.5;
  double cy = 0.5;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const BBox&, const BBox&) = default;
};

// Throws `code` when any field is outside [0, 1] or the box clipped to the
// unit square is empty.
void ValidateBBox(const BBox& box, ErrorCode code, const std::string& context);
double IoU(const BBox& a, const BBox& b);
double CenterDistance(const BBox& a, const BBox& b);

struct Detection {
  int class_id = kMugClassId;
  double confidence = 0.0;
  BBox bbox;

  friend bool operator==(const Detection&, const Detection&) = default;
};

void ValidateDetection(const Detection& d, ErrorCode code,
                       const std::string& context);

struct DetectionResult {
  std::string frame_id;
  std::string model_id;
  int64_t timestamp_ms = 0;
  std::vector<Detection> detections;
  double inference_latency_ms = 0.0;

  // Highest-confidence detection; first one wins on equal confidence.
  std::optional<Detection> Best() const;

  friend bool operator==(const DetectionResult&, const DetectionResult&) = default;
};

// Per-frame side information that travels with a frame into a backend.
struct FrameContext {
  std::string frame_id;
  int64_t timestamp_ms = 0;
  double lux = 0.0;
  std::optional<IlluminationCategory> scene_category;
  std::string color_label;
  std::optional<BBox> truth;
};

// Detector contract. Implementations are used by one inference worker at a
// time; errors surface as adaptfuse::Error with a detector-specific code.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  virtual DetectionResult Detect(const Frame& frame, const std::string& model_id,
                                 const FrameContext& context) = 0;
  virtual std::string Name() const = 0;
};

// (rgb_percent, category, color) -> confidence.
class MockConfidenceTable {
 public:
  void Set(int rgb_percent, IlluminationCategory category,
           const std::string& color, double confidence);
  std::optional<double> Lookup(int rgb_percent, IlluminationCategory category,
                               const std::string& color) const;
  size_t size() const { return entries_.size(); }

  // CSV columns fusion_rgb_percent,category,color,confidence.
  static MockConfidenceTable ReadCsv(const std::filesystem::path& path);
  void WriteCsv(const std::filesystem::path& path) const;

 private:
  std::map<std::tuple<int, IlluminationCategory, std::string>, double> entries_;
};

struct MockOptions {
  double noise_sigma = 0.0;
  uint64_t seed = 0;
  double latency_ms = 0.0;
};

// Deterministic stand-in for a trained detector: echoes the ground-truth box
// with the tabulated confidence, optionally perturbed by seeded Gaussian
// noise. Noise is derived from (seed, frame_id, model_id), so results do not
// depend on call order.
DetectionResult MockDetect(const Frame& frame, const ModelRecord& model,
                           const FrameContext& context,
                           const MockConfidenceTable& table,
                           const MockOptions& options);

class MockDetector : public DetectorBackend {
 public:
  MockDetector(Registry registry, MockConfidenceTable table, MockOptions options);

  DetectionResult Detect(const Frame& frame, const std::string& model_id,
                         const FrameContext& context) override;
  std::string Name() const override { return "mock"; }

 private:
  Registry registry_;
  MockConfidenceTable table_;
  MockOptions options_;
};

// Spurious-frame policy: a frame's best detection is excluded when its
// confidence is below `confidence_floor`, or when its center is more than
// `max_jump` from the last retained center AND its IoU with that box is
// below `iou_floor`.
struct SpuriousPolicy {
  double confidence_floor = 0.25;
  double max_jump = 0.3;
  double iou_floor = 0.05;
};

enum class ExclusionRule { kConfidenceFloor, kJump };
const char* ExclusionRuleName(ExclusionRule rule);

struct Exclusion {
  size_t index = 0;  // position in the input sequence
  std::string frame_id;
  ExclusionRule rule = ExclusionRule::kConfidenceFloor;
  std::string detail;
};

// Online form of the filter; the pipeline feeds it one frame at a time.
class SpuriousFilter {
 public:
  explicit SpuriousFilter(SpuriousPolicy policy) : policy_(policy) {}

  // Returns the triggered rule, or nullopt if the frame is retained. Frames
  // without detections are always retained and do not move the reference box.
  std::optional<std::pair<ExclusionRule, std::string>> Check(
      const DetectionResult& result);

 private:
  SpuriousPolicy policy_;
  std::optional<BBox> last_retained_;
};

struct FilterOutcome {
  std::vector<DetectionResult> retained;
  std::vector<Exclusion> exclusions;
};

FilterOutcome FilterSpurious(const std::vector<DetectionResult>& results,
                             const SpuriousPolicy& policy);

// One row per processed frame. `detection` is unset when the frame produced
// nothing (or the backend failed); `exclusion_rule` is empty for retained
// rows and holds the rule name (or "dropped") otherwise.
struct DetectionLogRow {
  std::string frame_id;
  int64_t timestamp_ms = 0;
  std::string model_id;
  std::optional<Detection> detection;
  bool excluded = false;
  std::string exclusion_rule;

  friend bool operator==(const DetectionLogRow&, const DetectionLogRow&) = default;
};

// Columns frame_id,timestamp_ms,model_id,class_id,confidence,cx,cy,w,h,
// excluded,exclusion_rule. Numbers use shortest round-trip formatting.
std::string DetectionLogCsv(const std::vector<DetectionLogRow>& rows);
void WriteDetectionLog(const std::vector<DetectionLogRow>& rows,
                       const std::filesystem::path& path);
std::vector<DetectionLogRow> ReadDetectionLog(const std::filesystem::path& path);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_DETECTION_HPP_
