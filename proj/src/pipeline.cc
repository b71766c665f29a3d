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

#include "adaptfuse/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"
#include "adaptfuse/image_io.hpp"
#include "json.hpp"

namespace adaptfuse {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::optional<SourceTuple> VectorSource::Next() {
  if (next_ >= tuples_.size()) return std::nullopt;
  return tuples_[next_++];
}

ReplaySource::ReplaySource(Manifest samples) : samples_(std::move(samples)) {
  std::stable_sort(samples_.begin(), samples_.end(),
                   [](const PairedSample& a, const PairedSample& b) {
                     return std::tie(a.recording_id, a.timestamp_ms) <
                            std::tie(b.recording_id, b.timestamp_ms);
                   });
}

ReplaySource ReplaySource::FromDirectory(const fs::path& root,
                                         const std::string& recording_id) {
  IngestReport report = Ingest(root);
  if (!report.errors.empty()) {
    Fail(ErrorCode::kIo, "source " + root.string() + ": " + report.errors.front());
  }
  Manifest selected;
  for (auto& s : report.manifest) {
    if (recording_id.empty() || s.recording_id == recording_id) selected.push_back(std::move(s));
  }
  if (selected.empty()) {
    Fail(ErrorCode::kIo, "source " + root.string() + ": no samples" +
                             (recording_id.empty() ? "" : " for recording '" + recording_id + "'"));
  }
  return ReplaySource(std::move(selected));
}

std::optional<SourceTuple> ReplaySource::Next() {
  if (next_ >= samples_.size()) return std::nullopt;
  const PairedSample& s = samples_[next_++];
  SourceTuple t{ReadPng(s.rgb_path, Modality::kRgb, s.timestamp_ms),
                ReadPng(s.lwir_path, Modality::kLwir, s.timestamp_ms),
                s.lux,
                s.sample_id,
                s.color_label,
                std::nullopt};
  if (!s.annotations.empty()) t.truth = s.annotations.front().bbox;
  return t;
}

RunOptions RunOptions::FromConfig(const PipelineConfig& config) {
  RunOptions o;
  o.homography = config.homography;
  o.spurious = config.spurious;
  o.targeting = config.targeting;
  o.hysteresis_margin = config.hysteresis_margin;
  o.trial_duration_s = config.trial_duration_s;
  o.threaded = config.threaded;
  o.realtime_pacing = config.realtime_pacing;
  o.log_timing = config.log_timing;
  return o;
}

std::vector<double> TrialLog::RetainedConfidences() const {
  std::vector<double> out;
  for (const auto& row : detections) {
    if (!row.excluded && row.detection) out.push_back(row.detection->confidence);
  }
  return out;
}

size_t TrialLog::SwitchCount() const {
  return static_cast<size_t>(std::count_if(
      switches.begin(), switches.end(), [](const SwitchEvent& e) { return e.from.has_value(); }));
}

void ValidateActiveModels(const Registry& registry, const Rankings& rankings) {
  for (IlluminationCategory c : AllCategories()) {
    const ModelRecord& m = SelectActive(c, registry, rankings);
    if (m.category != c) {
      Fail(ErrorCode::kConfig, std::string("active model '") + m.model_id + "' for " +
                                   CategoryName(c) + " is not a " + CategoryName(c) +
                                   " model");
    }
  }
}

namespace {

// Single-value hand-off between stages. Put replaces an unconsumed value and
// returns it so the caller can record the drop.
template <typename T>
class LatestSlot {
 public:
  std::optional<T> Put(T value) {
    std::optional<T> displaced;
    {
      std::lock_guard<std::mutex> lock(mu_);
      displaced = std::move(value_);
      value_ = std::move(value);
    }
    cv_.notify_one();
    return displaced;
  }

  std::optional<T> Take() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [this] { return value_.has_value() || closed_; });
    std::optional<T> out = std::move(value_);
    value_.reset();
    return out;
  }

  void Close() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::optional<T> value_;
  bool closed_ = false;
};

struct Captured {
  size_t index = 0;
  SourceTuple tuple;
};

struct PendingCommand {
  size_t index = 0;
  std::string frame_id;
  int64_t timestamp_ms = 0;
  PixelError error;
};

double ElapsedMs(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
      .count();
}

Json ConfidenceOrNull(const std::optional<Detection>& d) {
  return d ? Json(d->confidence) : Json(nullptr);
}

class TrialEngine {
 public:
  TrialEngine(DetectorBackend& backend, const Registry& registry, const Rankings& rankings,
              const RunOptions& options, Actuator& actuator)
      : backend_(backend),
        registry_(registry),
        rankings_(rankings),
        options_(options),
        actuator_(actuator),
        filter_(options.spurious) {
    switch_state_.hysteresis_margin = options.hysteresis_margin;
  }

  // Capture stage: every tuple gets a frame event.
  void Captured(size_t index, const SourceTuple& t) {
    Json e;
    e["event_type"] = "frame";
    e["frame_index"] = index;
    e["frame_id"] = t.frame_id;
    e["timestamp_ms"] = t.timestamp_ms();
    e["lux"] = t.lux;
    Record(index, std::move(e));
    std::lock_guard<std::mutex> lock(mu_);
    ++frames_;
  }

  void Dropped(size_t index, const std::string& frame_id, int64_t timestamp_ms,
               const std::string& stage) {
    Json e;
    e["event_type"] = "drop";
    e["frame_index"] = index;
    e["frame_id"] = frame_id;
    e["timestamp_ms"] = timestamp_ms;
    e["stage"] = stage;
    Record(index, std::move(e));
    std::lock_guard<std::mutex> lock(mu_);
    if (stage == "inference") {
      DetectionLogRow row;
      row.frame_id = frame_id;
      row.timestamp_ms = timestamp_ms;
      row.excluded = true;
      row.exclusion_rule = "dropped";
      rows_[index] = std::move(row);
      ++dropped_;
    }
  }

  // Inference stage. Returns the actuation request, if any.
  std::optional<PendingCommand> Infer(size_t index, const SourceTuple& t) {
    const auto started = std::chrono::steady_clock::now();
    const int64_t ts = t.timestamp_ms();

    StepResult step = Step(switch_state_, LuxReading{t.lux, ts});
    switch_state_ = step.state;
    const IlluminationCategory category = *switch_state_.current;
    if (step.event) {
      active_ = &SelectActive(category, registry_, rankings_);
      Json e;
      e["event_type"] = "switch";
      e["frame_index"] = index;
      e["frame_id"] = t.frame_id;
      e["timestamp_ms"] = ts;
      e["lux"] = t.lux;
      e["from"] = step.event->from ? Json(CategoryName(*step.event->from)) : Json(nullptr);
      e["to"] = CategoryName(step.event->to);
      e["model_id"] = active_->model_id;
      e["fusion_rgb_percent"] = active_->fusion_level.rgb_percent();
      Record(index, std::move(e));
      std::lock_guard<std::mutex> lock(mu_);
      switches_.push_back(*step.event);
      models_used_.push_back(active_->model_id);
    }
    const ModelRecord& model = *active_;

    DetectionLogRow row;
    row.frame_id = t.frame_id;
    row.timestamp_ms = ts;
    row.model_id = model.model_id;

    if (!frame_width_) {
      options_.targeting.Validate(t.rgb.width());
      frame_width_ = t.rgb.width();
      frame_height_ = t.rgb.height();
    }

    double fuse_ms = 0.0, detect_ms = 0.0;
    std::optional<DetectionResult> result;
    int fused_percent = -1;
    try {
      const auto fuse_start = std::chrono::steady_clock::now();
      const Frame registered =
          Register(t.lwir, options_.homography, t.rgb.width(), t.rgb.height());
      const Frame fused = Blend(t.rgb, registered, model.fusion_level);
      fused_percent = model.fusion_level.rgb_percent();
      fuse_ms = ElapsedMs(fuse_start);

      FrameContext ctx;
      ctx.frame_id = t.frame_id;
      ctx.timestamp_ms = ts;
      ctx.lux = t.lux;
      ctx.scene_category = Categorize(t.lux);
      ctx.color_label = t.color_label;
      ctx.truth = t.truth;
      const auto detect_start = std::chrono::steady_clock::now();
      result = backend_.Detect(fused, model.model_id, ctx);
      detect_ms = ElapsedMs(detect_start);
    } catch (const Error& err) {
      Json e;
      e["event_type"] = "error";
      e["frame_index"] = index;
      e["frame_id"] = t.frame_id;
      e["timestamp_ms"] = ts;
      e["code"] = ErrorCodeName(err.code());
      e["message"] = err.what();
      Record(index, std::move(e));
      std::lock_guard<std::mutex> lock(mu_);
      ++backend_errors_;
    }

    std::optional<Detection> best;
    double latency = 0.0;
    if (result) {
      best = result->Best();
      latency = result->inference_latency_ms;
      row.detection = best;
      if (auto excluded = filter_.Check(*result)) {
        row.excluded = true;
        row.exclusion_rule = ExclusionRuleName(excluded->first);
      }
    }

    Json e;
    e["event_type"] = "detection";
    e["frame_index"] = index;
    e["frame_id"] = t.frame_id;
    e["timestamp_ms"] = ts;
    e["model_id"] = model.model_id;
    e["fusion_rgb_percent"] = model.fusion_level.rgb_percent();
    e["detections"] = result ? result->detections.size() : 0;
    e["confidence"] = ConfidenceOrNull(best);
    e["excluded"] = row.excluded;
    e["exclusion_rule"] = row.exclusion_rule;
    e["inference_latency_ms"] = latency;
    if (options_.log_timing) {
      e["stage_ms"] = {{"fuse", fuse_ms}, {"detect", detect_ms},
                       {"inference_total", ElapsedMs(started)}};
    }
    Record(index, std::move(e));

    {
      std::lock_guard<std::mutex> lock(mu_);
      applied_.push_back({t.frame_id, model.model_id, model.fusion_level.rgb_percent(),
                          fused_percent});
      rows_[index] = row;
    }

    if (!best || row.excluded) return std::nullopt;
    return PendingCommand{index, t.frame_id, ts,
                          TargetError(*best, frame_width_, frame_height_)};
  }

  // Actuation stage.
  void Actuate(const PendingCommand& p) {
    const PanTiltCommand cmd = ErrorToCommand(p.error, options_.targeting);
    actuator_.IssueSteps(cmd);
    turret_ = Simulate(turret_, cmd, options_.targeting);
    CommandTraceRow row;
    row.frame_id = p.frame_id;
    row.dx_px = p.error.dx;
    row.dy_px = p.error.dy;
    row.command = cmd;
    row.pan_angle_deg = turret_.pan_deg(options_.targeting);
    row.tilt_angle_deg = turret_.tilt_deg(options_.targeting);
    Json e;
    e["event_type"] = "command";
    e["frame_index"] = p.index;
    e["frame_id"] = p.frame_id;
    e["timestamp_ms"] = p.timestamp_ms;
    e["dx_px"] = p.error.dx;
    e["dy_px"] = p.error.dy;
    e["pan_steps"] = cmd.pan_steps;
    e["tilt_steps"] = cmd.tilt_steps;
    e["pan_angle_deg"] = row.pan_angle_deg;
    e["tilt_angle_deg"] = row.tilt_angle_deg;
    Record(p.index, std::move(e));
    std::lock_guard<std::mutex> lock(mu_);
    commands_.emplace_back(p.index, std::move(row));
  }

  TrialLog Finish() {
    actuator_.Halt();
    TrialLog log;
    std::sort(events_.begin(), events_.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    for (auto& [index, seq, line] : events_) log.run_log.push_back(std::move(line));
    for (auto& [index, row] : rows_) log.detections.push_back(std::move(row));
    std::stable_sort(commands_.begin(), commands_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < commands_.size(); ++i) {
      commands_[i].second.cycle = static_cast<int64_t>(i);
      log.commands.push_back(std::move(commands_[i].second));
    }
    log.switches = std::move(switches_);
    log.models_used = std::move(models_used_);
    log.applied = std::move(applied_);
    log.frames = frames_;
    log.dropped = dropped_;
    log.backend_errors = backend_errors_;
    log.turret = turret_;
    return log;
  }

 private:
  void Record(size_t index, Json event) {
    std::string line = event.dump();
    std::lock_guard<std::mutex> lock(mu_);
    events_.emplace_back(index, seq_++, std::move(line));
  }

  DetectorBackend& backend_;
  const Registry& registry_;
  const Rankings& rankings_;
  RunOptions options_;
  Actuator& actuator_;

  // Inference stage only.
  SwitchState switch_state_;
  const ModelRecord* active_ = nullptr;
  SpuriousFilter filter_;
  int frame_width_ = 0;
  int frame_height_ = 0;

  // Actuation stage only.
  TurretState turret_;

  std::mutex mu_;
  uint64_t seq_ = 0;
  std::vector<std::tuple<size_t, uint64_t, std::string>> events_;
  std::map<size_t, DetectionLogRow> rows_;
  std::vector<std::pair<size_t, CommandTraceRow>> commands_;
  std::vector<SwitchEvent> switches_;
  std::vector<std::string> models_used_;
  std::vector<AppliedFrame> applied_;
  size_t frames_ = 0;
  size_t dropped_ = 0;
  size_t backend_errors_ = 0;
};

// Applies the trial-duration cutoff on top of the source.
class BoundedSource {
 public:
  BoundedSource(FrameSource& source, double duration_s)
      : source_(source), duration_ms_(duration_s * 1000.0) {}

  std::optional<SourceTuple> Next() {
    auto t = source_.Next();
    if (!t) return std::nullopt;
    if (!first_ts_) first_ts_ = t->timestamp_ms();
    if (t->timestamp_ms() < last_ts_) {
      Fail(ErrorCode::kInvalidArgument, "source is not time-ordered at frame '" +
                                            t->frame_id + "'");
    }
    last_ts_ = t->timestamp_ms();
    if (static_cast<double>(t->timestamp_ms() - *first_ts_) >= duration_ms_) return std::nullopt;
    return t;
  }

  int64_t first_ts() const { return first_ts_.value_or(0); }

 private:
  FrameSource& source_;
  double duration_ms_;
  std::optional<int64_t> first_ts_;
  int64_t last_ts_ = INT64_MIN;
};

void RunSequential(BoundedSource& source, TrialEngine& engine) {
  size_t index = 0;
  while (auto t = source.Next()) {
    engine.Captured(index, *t);
    if (auto cmd = engine.Infer(index, *t)) engine.Actuate(*cmd);
    ++index;
  }
}

void RunThreaded(BoundedSource& source, TrialEngine& engine, bool realtime_pacing) {
  LatestSlot<Captured> frames;
  LatestSlot<PendingCommand> commands;
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto record_failure = [&] {
    std::lock_guard<std::mutex> lock(failure_mu);
    if (!failure) failure = std::current_exception();
  };

  std::thread inference([&] {
    try {
      while (auto c = frames.Take()) {
        if (auto cmd = engine.Infer(c->index, c->tuple)) {
          if (auto displaced = commands.Put(std::move(*cmd))) {
            engine.Dropped(displaced->index, displaced->frame_id, displaced->timestamp_ms,
                           "actuation");
          }
        }
      }
    } catch (...) {
      record_failure();
    }
    commands.Close();
  });
  std::thread actuation([&] {
    try {
      while (auto cmd = commands.Take()) engine.Actuate(*cmd);
    } catch (...) {
      record_failure();
    }
  });

  try {
    const auto start = std::chrono::steady_clock::now();
    size_t index = 0;
    while (auto t = source.Next()) {
      if (realtime_pacing) {
        std::this_thread::sleep_until(
            start + std::chrono::milliseconds(t->timestamp_ms() - source.first_ts()));
      }
      engine.Captured(index, *t);
      if (auto displaced = frames.Put(Captured{index, std::move(*t)})) {
        engine.Dropped(displaced->index, displaced->tuple.frame_id,
                       displaced->tuple.timestamp_ms(), "inference");
      }
      ++index;
    }
  } catch (...) {
    record_failure();
  }
  frames.Close();
  inference.join();
  actuation.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

TrialLog RunTrial(FrameSource& source, DetectorBackend& backend, const Registry& registry,
                  const Rankings& rankings, const RunOptions& options, Actuator& actuator) {
  ValidateActiveModels(registry, rankings);
  if (!(options.trial_duration_s > 0.0)) {
    Fail(ErrorCode::kConfig, "trial duration must be positive");
  }
  TrialEngine engine(backend, registry, rankings, options, actuator);
  BoundedSource bounded(source, options.trial_duration_s);
  if (options.threaded) {
    RunThreaded(bounded, engine, options.realtime_pacing);
  } else {
    RunSequential(bounded, engine);
  }
  return engine.Finish();
}

std::string SwitchEventsCsv(const std::vector<SwitchEvent>& events) {
  CsvTable table({"timestamp_ms", "lux", "from", "to"});
  for (const auto& e : events) {
    table.AddRow({std::to_string(e.timestamp_ms), FormatDouble(e.lux),
                  e.from ? CategoryName(*e.from) : "", CategoryName(e.to)});
  }
  return table.ToString();
}

void WriteTrialLog(const TrialLog& log, const fs::path& out_dir) {
  WriteDetectionLog(log.detections, out_dir / "detections.csv");
  WriteTextFile(out_dir / "commands.csv", CommandTraceCsv(log.commands));
  WriteTextFile(out_dir / "switches.csv", SwitchEventsCsv(log.switches));
  std::string jsonl;
  for (const auto& line : log.run_log) jsonl += line + "\n";
  WriteTextFile(out_dir / "run_log.jsonl", jsonl);
}

}  // namespace adaptfuse
