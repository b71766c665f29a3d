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

#include "adaptfuse/adaptfuse.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "adaptfuse/config.hpp"
#include "adaptfuse/csv.hpp"
#include "adaptfuse/dataset.hpp"
#include "adaptfuse/error.hpp"
#include "adaptfuse/evaluation.hpp"
#include "adaptfuse/frame.hpp"
#include "adaptfuse/fusion.hpp"
#include "adaptfuse/gen_fixtures.hpp"
#include "adaptfuse/illumination.hpp"
#include "adaptfuse/image_io.hpp"
#include "adaptfuse/pipeline.hpp"
#include "adaptfuse/registry.hpp"
#include "adaptfuse/remote.hpp"
#include "json.hpp"

struct af_frame {
  adaptfuse::Frame frame;
};

struct af_registry {
  adaptfuse::Registry registry;
};

struct af_config {
  std::string text;  // INI file content, empty for defaults
  std::filesystem::path base_dir = ".";
  std::map<std::string, std::string> overrides;  // "section.key" -> value
};

namespace {

namespace fs = std::filesystem;
using adaptfuse::Error;
using adaptfuse::ErrorCode;
using adaptfuse::Fail;

thread_local std::string g_last_error;

af_status Capture() {
  try {
    throw;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<af_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown failure";
  }
  return AF_ERR_INTERNAL;
}

template <typename F>
af_status Guard(F&& body) {
  try {
    g_last_error.clear();
    body();
    return AF_OK;
  } catch (...) {
    return Capture();
  }
}

void Require(const void* p, const char* name) {
  if (p == nullptr) Fail(ErrorCode::kInvalidArgument, std::string(name) + " must not be null");
}

char* Dup(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

void Emit(char** target, const std::string& text) {
  if (target != nullptr) *target = Dup(text);
}

adaptfuse::Modality ToModality(af_modality m) {
  switch (m) {
    case AF_RGB:
      return adaptfuse::Modality::kRgb;
    case AF_LWIR:
      return adaptfuse::Modality::kLwir;
    case AF_FUSED:
      return adaptfuse::Modality::kFused;
  }
  Fail(ErrorCode::kInvalidArgument, "unknown modality");
}

af_category ToC(adaptfuse::IlluminationCategory c) {
  switch (c) {
    case adaptfuse::IlluminationCategory::kFullLight:
      return AF_FULL_LIGHT;
    case adaptfuse::IlluminationCategory::kDimLight:
      return AF_DIM_LIGHT;
    case adaptfuse::IlluminationCategory::kNoLight:
      break;
  }
  return AF_NO_LIGHT;
}

adaptfuse::PipelineConfig Resolve(const af_config* config) {
  namespace pt = boost::property_tree;
  if (config == nullptr) return adaptfuse::PipelineConfig::Parse("", ".");
  if (config->overrides.empty()) {
    return adaptfuse::PipelineConfig::Parse(config->text, config->base_dir);
  }
  pt::ptree tree;
  try {
    std::istringstream in(config->text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    Fail(ErrorCode::kConfig, std::string("malformed config: ") + e.what());
  }
  for (const auto& [key, value] : config->overrides) tree.put(key, value);
  std::ostringstream out;
  pt::write_ini(out, tree);
  return adaptfuse::PipelineConfig::Parse(out.str(), config->base_dir);
}

adaptfuse::Registry LoadRegistry(const adaptfuse::PipelineConfig& c) {
  return c.registry_path.empty() ? adaptfuse::Registry::Default()
                                 : adaptfuse::Registry::LoadJson(c.registry_path);
}

std::string Percent(double fraction) { return adaptfuse::FormatFixed(fraction * 100.0, 2); }

}  // namespace

extern "C" {

const char* af_version(void) { return "0.1.0"; }

const char* af_last_error(void) { return g_last_error.c_str(); }

const char* af_status_name(af_status status) {
  if (status == AF_OK) return "ok";
  if (status < AF_ERR_INVALID_ARGUMENT || status > AF_ERR_INTERNAL) return "unknown";
  return adaptfuse::ErrorCodeName(static_cast<ErrorCode>(static_cast<int>(status)));
}

int af_status_is_validation(af_status status) {
  switch (status) {
    case AF_ERR_INVALID_ARGUMENT:
    case AF_ERR_IO:
    case AF_ERR_PARSE:
    case AF_ERR_CONFIG:
    case AF_ERR_MEMBERSHIP:
    case AF_ERR_UNKNOWN_MODEL:
      return 1;
    default:
      return 0;
  }
}

void af_string_free(char* text) { std::free(text); }

af_status af_categorize(double lux, af_category* out) {
  return Guard([&] {
    Require(out, "out");
    *out = ToC(adaptfuse::Categorize(lux));
  });
}

const char* af_category_name(af_category category) {
  switch (category) {
    case AF_FULL_LIGHT:
      return "full_light";
    case AF_DIM_LIGHT:
      return "dim_light";
    case AF_NO_LIGHT:
      return "no_light";
  }
  return "unknown";
}

af_status af_categorize_trace(const af_config* config, const char* lux_csv, char** report) {
  return Guard([&] {
    Require(lux_csv, "lux_csv");
    const double hysteresis_margin = Resolve(config).hysteresis_margin;
    const auto trace = adaptfuse::ReadLuxTrace(lux_csv);
    std::string text = "timestamp_ms,lux,category\n";
    adaptfuse::SwitchState state;
    state.hysteresis_margin = hysteresis_margin;
    std::vector<adaptfuse::SwitchEvent> events;
    for (const auto& r : trace) {
      const auto step = adaptfuse::Step(state, r);
      state = step.state;
      if (step.event) events.push_back(*step.event);
      text += std::to_string(r.timestamp_ms) + "," + adaptfuse::FormatDouble(r.lux) + "," +
              adaptfuse::CategoryName(*state.current) + "\n";
    }
    size_t switches = 0;
    for (const auto& e : events) {
      if (!e.from) {
        text += "init " + std::string(adaptfuse::CategoryName(e.to)) + " at " +
                std::to_string(e.timestamp_ms) + " ms\n";
      } else {
        ++switches;
        text += "switch " + std::string(adaptfuse::CategoryName(*e.from)) + " -> " +
                adaptfuse::CategoryName(e.to) + " at " + std::to_string(e.timestamp_ms) +
                " ms (lux " + adaptfuse::FormatDouble(e.lux) + ")\n";
      }
    }
    text += "switches: " + std::to_string(switches) + "\n";
    Emit(report, text);
  });
}

af_status af_frame_create(int width, int height, af_modality modality, const uint8_t* pixels,
                          size_t length, int64_t timestamp_ms, af_frame** out) {
  return Guard([&] {
    Require(out, "out");
    if (pixels == nullptr && length != 0) Require(pixels, "pixels");
    std::vector<uint8_t> buf(pixels, pixels + length);
    *out = new af_frame{adaptfuse::Frame(width, height, ToModality(modality), std::move(buf),
                                         timestamp_ms)};
  });
}

af_status af_frame_read_png(const char* path, af_modality modality, af_frame** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new af_frame{adaptfuse::ReadPng(path, ToModality(modality))};
  });
}

af_status af_frame_write_png(const af_frame* frame, const char* path) {
  return Guard([&] {
    Require(frame, "frame");
    Require(path, "path");
    adaptfuse::WritePng(frame->frame, path);
  });
}

int af_frame_width(const af_frame* frame) { return frame ? frame->frame.width() : 0; }
int af_frame_height(const af_frame* frame) { return frame ? frame->frame.height() : 0; }

const uint8_t* af_frame_pixels(const af_frame* frame, size_t* length) {
  if (frame == nullptr) {
    if (length) *length = 0;
    return nullptr;
  }
  const auto px = frame->frame.pixels();
  if (length) *length = px.size();
  return px.data();
}

void af_frame_free(af_frame* frame) { delete frame; }

af_status af_blend(const af_frame* rgb, const af_frame* lwir, int rgb_percent, af_frame** out) {
  return Guard([&] {
    Require(rgb, "rgb");
    Require(lwir, "lwir");
    Require(out, "out");
    *out = new af_frame{
        adaptfuse::Blend(rgb->frame, lwir->frame, adaptfuse::FusionLevel(rgb_percent))};
  });
}

af_status af_register(const af_frame* lwir, const double homography[9], int target_width,
                      int target_height, af_frame** out) {
  return Guard([&] {
    Require(lwir, "lwir");
    Require(homography, "homography");
    Require(out, "out");
    std::array<double, 9> m{};
    std::copy(homography, homography + 9, m.begin());
    *out = new af_frame{adaptfuse::Register(lwir->frame, adaptfuse::Homography(m),
                                            target_width, target_height)};
  });
}

af_status af_sem(double std_dev, size_t n, double* out) {
  return Guard([&] {
    Require(out, "out");
    *out = adaptfuse::Sem(std_dev, n);
  });
}

af_status af_delta(double mean_a, double mean_b, double* absolute, double* relative_pct,
                   int* relative_defined) {
  return Guard([&] {
    Require(absolute, "absolute");
    const auto d = adaptfuse::DeltaReport(mean_a, mean_b);
    *absolute = d.absolute;
    if (relative_defined) *relative_defined = d.relative_pct.has_value() ? 1 : 0;
    if (relative_pct && d.relative_pct) *relative_pct = *d.relative_pct;
  });
}

af_status af_composite_scores(const double* means, const double* stds, size_t n,
                              double* scores) {
  return Guard([&] {
    Require(means, "means");
    Require(stds, "stds");
    Require(scores, "scores");
    std::vector<adaptfuse::CohortMember> members;
    for (size_t i = 0; i < n; ++i) {
      members.push_back({"m" + std::to_string(i), 100, means[i], stds[i]});
    }
    const adaptfuse::CohortStats cohort(std::move(members));
    for (size_t i = 0; i < n; ++i) {
      scores[i] = adaptfuse::CompositeScore("m" + std::to_string(i), cohort);
    }
  });
}

af_status af_registry_default(af_registry** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new af_registry{adaptfuse::Registry::Default()};
  });
}

af_status af_registry_load(const char* json_path, af_registry** out) {
  return Guard([&] {
    Require(json_path, "json_path");
    Require(out, "out");
    *out = new af_registry{adaptfuse::Registry::LoadJson(json_path)};
  });
}

size_t af_registry_size(const af_registry* registry) {
  return registry ? registry->registry.records().size() : 0;
}

af_status af_registry_save(const af_registry* registry, const char* json_path) {
  return Guard([&] {
    Require(registry, "registry");
    Require(json_path, "json_path");
    registry->registry.SaveJson(json_path);
  });
}

void af_registry_free(af_registry* registry) { delete registry; }

af_status af_config_default(af_config** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new af_config{};
  });
}

af_status af_config_load(const char* path, af_config** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    const fs::path p(path);
    auto config = std::make_unique<af_config>();
    config->text = adaptfuse::ReadTextFile(p);
    config->base_dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    try {
      (void)Resolve(config.get());
    } catch (const Error& e) {
      throw Error(e.code(), p.string() + ": " + e.what());
    }
    *out = config.release();
  });
}

af_status af_config_set(af_config* config, const char* key, const char* value) {
  return Guard([&] {
    Require(config, "config");
    Require(key, "key");
    Require(value, "value");
    const std::string k(key);
    const auto dot = k.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == k.size()) {
      Fail(ErrorCode::kConfig, "override key '" + k + "' must be section.key");
    }
    config->overrides[k] = value;
  });
}

af_status af_config_validate(const af_config* config) {
  return Guard([&] { (void)Resolve(config); });
}

void af_config_free(af_config* config) { delete config; }

af_status af_fuse(const af_config* config, const char* rgb_dir, const char* lwir_dir,
                  const char* labels_dir, const char* levels, const char* out_dir,
                  char** summary) {
  return Guard([&] {
    Require(rgb_dir, "rgb_dir");
    Require(lwir_dir, "lwir_dir");
    Require(out_dir, "out_dir");
    const auto c = Resolve(config);
    adaptfuse::BatchFuseOptions options;
    options.levels = adaptfuse::ParseFusionLevels(levels ? levels : "all");
    options.homography = c.homography;
    options.jobs = c.jobs;
    auto ingest = adaptfuse::IngestPairs(rgb_dir, lwir_dir, labels_dir ? labels_dir : "");
    const auto report = adaptfuse::BatchFuse(ingest.manifest, options, out_dir);
    adaptfuse::WriteManifest(ingest.manifest, fs::path(out_dir) / "pairs_manifest.csv");
    std::string text = "pairs: " + std::to_string(ingest.manifest.size()) + "\n" +
                       "levels: " + std::to_string(options.levels.size()) + "\n" +
                       "images written: " + std::to_string(report.images_written) + "\n" +
                       "label files written: " + std::to_string(report.label_files_written) +
                       "\n";
    for (const auto& e : ingest.errors) text += "skipped: " + e + "\n";
    for (const auto& e : report.errors) text += "failed: " + e + "\n";
    Emit(summary, text);
  });
}

af_status af_split(const af_config* config, const char* manifest_csv, const char* out_dir,
                   char** summary) {
  return Guard([&] {
    Require(manifest_csv, "manifest_csv");
    const auto c = Resolve(config);
    const fs::path manifest_path(manifest_csv);
    const auto manifest = adaptfuse::ReadManifest(manifest_path);
    const auto result = adaptfuse::Split(manifest, c.split);
    const fs::path out =
        out_dir ? fs::path(out_dir)
                : (manifest_path.has_parent_path() ? manifest_path.parent_path() : fs::path("."));
    adaptfuse::WriteManifest(result.train, out / "train.csv");
    adaptfuse::WriteManifest(result.val, out / "val.csv");
    Emit(summary, "samples: " + std::to_string(manifest.size()) + "\ntrain: " +
                      std::to_string(result.train.size()) + " -> " +
                      (out / "train.csv").string() + "\nval: " +
                      std::to_string(result.val.size()) + " -> " + (out / "val.csv").string() +
                      "\n");
  });
}

af_status af_evaluate(const af_config* config, const char* logs_dir, const char* manifest_csv,
                      const char* out_dir, char** summary) {
  return Guard([&] {
    Require(logs_dir, "logs_dir");
    Require(manifest_csv, "manifest_csv");
    Require(out_dir, "out_dir");
    const auto c = Resolve(config);
    const auto registry = LoadRegistry(c);
    auto trials = adaptfuse::LoadTrials(logs_dir, manifest_csv, registry);
    adaptfuse::EvaluationOptions options;
    options.std_mode = c.std_mode;
    const auto report = adaptfuse::Evaluate(std::move(trials), registry, options);
    adaptfuse::WriteEvaluation(report, out_dir);

    std::string text = "trials: " + std::to_string(report.trials.size()) + "\n";
    for (const auto& [category, ranked] : report.rankings) {
      text += std::string(adaptfuse::CategoryName(category)) + " top:";
      for (size_t i = 0; i < ranked.size() && i < 3; ++i) {
        text += " " + std::to_string(ranked[i].rank) + "." + ranked[i].model_id + "(" +
                adaptfuse::FormatFixed(ranked[i].composite, 3) + ")";
      }
      text += "\n";
    }
    text += "color means:";
    for (const auto& m : report.color_means) text += " " + m.color + "=" + m.PercentString() + "%";
    text += "\n";
    for (const auto& d : report.deltas) {
      text += std::string(adaptfuse::CategoryName(d.category)) + " " + d.model_a + " vs " +
              d.model_b + ": " + adaptfuse::FormatFixed(d.delta.absolute, 4) + " abs, " +
              (d.delta.relative_pct ? adaptfuse::FormatFixed(*d.delta.relative_pct, 2) + "%"
                                    : std::string("undefined")) +
              " rel\n";
    }
    for (const auto& w : report.warnings) text += "warning: " + w + "\n";
    Emit(summary, text);
  });
}

af_status af_rank(const char* stats_csv, const char* category, const char* out_csv,
                  char** table) {
  return Guard([&] {
    Require(stats_csv, "stats_csv");
    Require(category, "category");
    const auto cat = adaptfuse::ParseCategory(category);
    const auto cells = adaptfuse::ReadCellStatsCsv(stats_csv);
    const auto cohort = adaptfuse::CohortFromCells(cells, cat);
    const auto ranked = adaptfuse::Rank(cohort);
    adaptfuse::Rankings rankings{{cat, ranked}};
    if (out_csv) adaptfuse::WriteRankingsCsv(rankings, out_csv);
    std::string text = "rank  model_id      fusion  mean     std      composite\n";
    for (const auto& r : ranked) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-5d %-13s %-7s %-8.4f %-8.4f %.4f\n", r.rank,
                    r.model_id.c_str(), adaptfuse::FusionLevel(r.rgb_percent).Label().c_str(),
                    r.mean, r.std, r.composite);
      text += line;
    }
    Emit(table, text);
  });
}

af_status af_run(const af_config* config, const char* source_dir, const char* recording_id,
                 const char* out_dir, char** summary) {
  return Guard([&] {
    Require(source_dir, "source_dir");
    Require(out_dir, "out_dir");
    const auto c = Resolve(config);
    const auto registry = LoadRegistry(c);
    const auto rankings = c.rankings_path.empty()
                              ? adaptfuse::RankingsFromActiveMap(c.active_models, registry)
                              : adaptfuse::ReadRankingsCsv(c.rankings_path);
    adaptfuse::ValidateActiveModels(registry, rankings);

    std::unique_ptr<adaptfuse::DetectorBackend> backend;
    if (c.backend == adaptfuse::BackendKind::kMock) {
      if (c.mock_table_path.empty()) {
        Fail(ErrorCode::kConfig, "the mock backend needs [detector] mock_table");
      }
      backend = std::make_unique<adaptfuse::MockDetector>(
          registry, adaptfuse::MockConfidenceTable::ReadCsv(c.mock_table_path), c.mock);
    } else {
      backend = std::make_unique<adaptfuse::RemoteDetector>(c.endpoint, c.timeout_ms);
    }
    auto source =
        adaptfuse::ReplaySource::FromDirectory(source_dir, recording_id ? recording_id : "");
    adaptfuse::SimulatedActuator actuator(c.targeting);
    const auto log = adaptfuse::RunTrial(source, *backend, registry, rankings,
                                         adaptfuse::RunOptions::FromConfig(c), actuator);
    adaptfuse::WriteTrialLog(log, out_dir);

    const auto confidences = log.RetainedConfidences();
    nlohmann::ordered_json s;
    s["frames"] = log.frames;
    s["dropped"] = log.dropped;
    s["backend_errors"] = log.backend_errors;
    s["switches"] = log.SwitchCount();
    s["models_used"] = log.models_used;
    s["retained_detections"] = confidences.size();
    s["trial_mean"] = confidences.empty() ? nlohmann::ordered_json(nullptr)
                                          : nlohmann::ordered_json(adaptfuse::Mean(confidences));
    s["commands"] = log.commands.size();
    s["final_pan_deg"] = log.turret.pan_deg(c.targeting);
    s["final_tilt_deg"] = log.turret.tilt_deg(c.targeting);
    adaptfuse::WriteTextFile(fs::path(out_dir) / "summary.json", s.dump(2) + "\n");

    std::string text = "frames: " + std::to_string(log.frames) +
                       "\ndropped: " + std::to_string(log.dropped) +
                       "\nbackend errors: " + std::to_string(log.backend_errors) +
                       "\nmodels used:";
    for (const auto& m : log.models_used) text += " " + m;
    text += "\nswitches: " + std::to_string(log.SwitchCount()) +
            "\ncommands: " + std::to_string(log.commands.size()) + "\ntrial mean: " +
            (confidences.empty() ? std::string("none") : Percent(adaptfuse::Mean(confidences)) + "%") +
            "\n";
    Emit(summary, text);
  });
}

af_status af_protocol_check(const char* endpoint, int timeout_ms, const char* probe_model,
                            size_t* violations, char** report) {
  return Guard([&] {
    Require(endpoint, "endpoint");
    if (timeout_ms <= 0) Fail(ErrorCode::kInvalidArgument, "timeout must be positive");
    const auto r =
        adaptfuse::RunProtocolCheck(endpoint, timeout_ms, probe_model ? probe_model : "");
    std::string text;
    for (const auto& check : r.checks) {
      text += std::string(check.passed ? "PASS " : "FAIL ") + check.name;
      if (!check.detail.empty()) text += ": " + check.detail;
      text += "\n";
    }
    text += "violations: " + std::to_string(r.violations()) + "\n";
    if (violations) *violations = r.violations();
    Emit(report, text);
  });
}

af_status af_gen_fixtures(const char* out_dir, uint64_t seed, double duration_s,
                          char** summary) {
  return Guard([&] {
    Require(out_dir, "out_dir");
    adaptfuse::FixtureOptions options;
    options.seed = seed;
    if (duration_s > 0.0) options.duration_s = duration_s;
    const auto s = adaptfuse::GenerateFixtures(out_dir, options);
    Emit(summary, "recordings: " + std::to_string(s.recordings) +
                      "\nframes: " + std::to_string(s.frames) +
                      "\nmock table entries: " + std::to_string(s.mock_entries) +
                      "\ntrials: " + std::to_string(s.trials) + "\n");
  });
}

}  // extern "C"
