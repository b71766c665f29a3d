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

#ifndef ADAPTFUSE_PIPELINE_HPP_
#define ADAPTFUSE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adaptfuse/config.hpp"
#include "adaptfuse/dataset.hpp"
#include "adaptfuse/detection.hpp"
#include "adaptfuse/frame.hpp"
#include "adaptfuse/fusion.hpp"
#include "adaptfuse/illumination.hpp"
#include "adaptfuse/registry.hpp"
#include "adaptfuse/turret.hpp"

namespace adaptfuse {

// One capture: the frame pair plus the lux reading taken alongside it.
struct SourceTuple {
  Frame rgb;
  Frame lwir;
  double lux = 0.0;
  std::string frame_id;
  std::string color_label;
  std::optional<BBox> truth;  // first annotated box, if any

  int64_t timestamp_ms() const { return rgb.timestamp_ms(); }
};

// Time-ordered tuple stream. Called from a single thread.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<SourceTuple> Next() = 0;
};

class VectorSource : public FrameSource {
 public:
  explicit VectorSource(std::vector<SourceTuple> tuples) : tuples_(std::move(tuples)) {}
  std::optional<SourceTuple> Next() override;

 private:
  std::vector<SourceTuple> tuples_;
  size_t next_ = 0;
};

// Replays paired samples in timestamp order, decoding images lazily.
class ReplaySource : public FrameSource {
 public:
  explicit ReplaySource(Manifest samples);
  // Ingests a dataset directory; `recording_id` restricts the replay to one
  // recording. Throws kIo on any ingest error or when nothing is left.
  static ReplaySource FromDirectory(const std::filesystem::path& root,
                                    const std::string& recording_id = "");

  std::optional<SourceTuple> Next() override;
  size_t size() const { return samples_.size(); }

 private:
  Manifest samples_;
  size_t next_ = 0;
};

struct RunOptions {
  Homography homography = Homography::Identity();
  SpuriousPolicy spurious;
  TargetingConfig targeting;
  double hysteresis_margin = 0.0;
  double trial_duration_s = 10.0;
  // Three stages on separate threads with latest-wins hand-off. Off: every
  // stage runs inline on the caller's thread.
  bool threaded = false;
  // Threaded mode only: capture sleeps to honour source timestamps.
  bool realtime_pacing = false;
  // Adds wall-clock stage durations to detection events.
  bool log_timing = false;

  static RunOptions FromConfig(const PipelineConfig& config);
};

// Fusion level and model that handled one frame.
struct AppliedFrame {
  std::string frame_id;
  std::string model_id;
  int rgb_percent = 0;
  int fused_rgb_percent = 0;
};

struct TrialLog {
  std::vector<DetectionLogRow> detections;  // one per consumed tuple
  std::vector<CommandTraceRow> commands;
  std::vector<SwitchEvent> switches;  // includes the initialization event
  std::vector<std::string> models_used;  // activation order
  std::vector<AppliedFrame> applied;     // frames that reached inference
  std::vector<std::string> run_log;      // JSON lines
  size_t frames = 0;
  size_t dropped = 0;
  size_t backend_errors = 0;
  TurretState turret;

  // Confidences of retained rows with a detection, in frame order.
  std::vector<double> RetainedConfidences() const;
  // Post-initialization switches.
  size_t SwitchCount() const;
};

// Throws kConfig unless every category resolves to a registered fine-tuned
// model of the same category.
void ValidateActiveModels(const Registry& registry, const Rankings& rankings);

// Runs one trial. Backend errors become empty detections plus an error
// event; the actuator receives every issued command.
TrialLog RunTrial(FrameSource& source, DetectorBackend& backend,
                  const Registry& registry, const Rankings& rankings,
                  const RunOptions& options, Actuator& actuator);

// detections.csv, commands.csv, switches.csv, run_log.jsonl.
void WriteTrialLog(const TrialLog& log, const std::filesystem::path& out_dir);
std::string SwitchEventsCsv(const std::vector<SwitchEvent>& events);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_PIPELINE_HPP_
