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

// adaptfuse command-line tool. Talks to the library through the C API only.
//
// Exit codes: 0 success, 1 validation error (bad flags, missing or malformed
// input, failed conformance check), 2 runtime error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adaptfuse/adaptfuse.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

std::string Absolute(const std::string& path) {
  return std::filesystem::absolute(path).lexically_normal().string();
}

const char* OrNull(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

// Loaded config plus flag overrides; owns the handle.
class Config {
 public:
  Config() = default;
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;
  ~Config() { af_config_free(handle_); }

  af_status Open(const std::string& path) {
    return path.empty() ? af_config_default(&handle_) : af_config_load(path.c_str(), &handle_);
  }
  af_status Set(const char* key, const std::string& value) {
    return af_config_set(handle_, key, value.c_str());
  }
  const af_config* get() const { return handle_; }

 private:
  af_config* handle_ = nullptr;
};

int Report(af_status status, const std::string& context) {
  if (status == AF_OK) return 0;
  std::cerr << "adaptfuse " << context << ": " << af_status_name(status) << ": "
            << af_last_error() << "\n";
  return af_status_is_validation(status) ? kExitValidation : kExitRuntime;
}

int PrintOwned(af_status status, char* text, const std::string& context) {
  if (status == AF_OK && text != nullptr) std::cout << text;
  af_string_free(text);
  return Report(status, context);
}

struct Overrides {
  std::vector<std::pair<const char*, std::string>> values;
  void Add(const char* key, const std::string& value) {
    if (!value.empty()) values.emplace_back(key, value);
  }
};

int OpenConfig(Config& config, const std::string& path, const Overrides& overrides,
               const std::string& context) {
  if (int rc = Report(config.Open(path), context)) return rc;
  for (const auto& [key, value] : overrides.values) {
    if (int rc = Report(config.Set(key, value), context)) return rc;
  }
  return Report(af_config_validate(config.get()), context);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptfuse: adaptive RGB-LWIR fusion detection toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(af_version()));

  std::string config_path;
  auto add_config = [&config_path](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  };

  // fuse
  auto* fuse = app.add_subcommand("fuse", "Register and blend paired frames at fusion levels");
  add_config(fuse);
  std::string rgb_dir, lwir_dir, labels_dir, levels = "all", fuse_out, homography;
  int jobs = 0;
  fuse->add_option("--rgb", rgb_dir, "Directory of RGB <stem>.png")->required()->check(CLI::ExistingDirectory);
  fuse->add_option("--lwir", lwir_dir, "Directory of LWIR <stem>.png")->required()->check(CLI::ExistingDirectory);
  fuse->add_option("--labels", labels_dir, "Directory of <stem>.txt annotations")->check(CLI::ExistingDirectory);
  fuse->add_option("--levels", levels, "'all' or comma-separated RGB percentages")->capture_default_str();
  fuse->add_option("--out", fuse_out, "Output directory")->required();
  fuse->add_option("--homography", homography, "Nine row-major coefficients, target to LWIR");
  fuse->add_option("--jobs", jobs, "Worker threads (default 1)")->check(CLI::PositiveNumber);

  // split
  auto* split = app.add_subcommand("split", "Seeded train/validation split of a manifest");
  add_config(split);
  std::string split_manifest, split_out, split_fraction, split_seed, stratify;
  bool group = false;
  split->add_option("--manifest", split_manifest, "Manifest CSV")->required()->check(CLI::ExistingFile);
  split->add_option("--fraction", split_fraction, "Train fraction (default 0.75)");
  split->add_option("--seed", split_seed, "Split seed (default 0)");
  split->add_option("--stratify", stratify, "none, color or category");
  split->add_flag("--group-by-recording", group, "Keep recordings on one side");
  split->add_option("--out", split_out, "Output directory (default: manifest directory)");

  // categorize
  auto* categorize = app.add_subcommand("categorize", "Categorize a lux trace and list switches");
  add_config(categorize);
  std::string lux_trace, margin;
  categorize->add_option("--lux-trace", lux_trace, "CSV with timestamp_ms,lux")->required()->check(CLI::ExistingFile);
  categorize->add_option("--hysteresis", margin, "Hysteresis margin in lux (default 0)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Statistics suite over trial logs");
  add_config(evaluate);
  std::string logs_dir, eval_manifest, eval_out, std_mode, eval_registry;
  evaluate->add_option("--logs", logs_dir, "Directory of <trial_id>.csv detection logs")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--manifest", eval_manifest, "Trial manifest CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", eval_out, "Output directory")->required();
  evaluate->add_option("--std", std_mode, "population or sample");
  evaluate->add_option("--registry", eval_registry, "Registry JSON")->check(CLI::ExistingFile);

  // rank
  auto* rank = app.add_subcommand("rank", "Composite-score ranking of one category");
  add_config(rank);
  std::string stats_csv, rank_category, rank_out;
  rank->add_option("--stats", stats_csv, "fusion_stats.csv")->required()->check(CLI::ExistingFile);
  rank->add_option("--category", rank_category, "full_light, dim_light or no_light")->required();
  rank->add_option("--out", rank_out, "Write the ranking as CSV");

  // run
  auto* run = app.add_subcommand("run", "Run one pipeline trial over a replay source");
  add_config(run);
  std::string source_dir, recording, backend, endpoint, run_out = "run_out", mock_table, run_registry,
      rankings, duration, seed, noise;
  bool threaded = false;
  run->add_option("--source", source_dir, "Dataset directory to replay")->required()->check(CLI::ExistingDirectory);
  run->add_option("--recording", recording, "Replay only this recording");
  run->add_option("--backend", backend, "mock or remote")->check(CLI::IsMember({"mock", "remote"}));
  run->add_option("--endpoint", endpoint, "Detector service URI");
  run->add_option("--mock-table", mock_table, "Mock confidence table CSV")->check(CLI::ExistingFile);
  run->add_option("--registry", run_registry, "Registry JSON")->check(CLI::ExistingFile);
  run->add_option("--rankings", rankings, "Rankings CSV selecting active models")->check(CLI::ExistingFile);
  run->add_option("--duration", duration, "Trial duration in seconds (default 10)");
  run->add_option("--seed", seed, "Mock noise seed");
  run->add_option("--noise", noise, "Mock noise sigma");
  run->add_flag("--threaded", threaded, "Three-stage threaded pipeline");
  run->add_option("--out", run_out, "Output directory")->capture_default_str();

  // protocol-check
  auto* check = app.add_subcommand("protocol-check", "Probe a detector service for conformance");
  add_config(check);
  std::string check_endpoint, probe_model;
  int timeout_ms = 2000;
  check->add_option("--endpoint", check_endpoint, "Detector service URI")->required();
  check->add_option("--timeout-ms", timeout_ms, "Request timeout")->capture_default_str()->check(CLI::PositiveNumber);
  check->add_option("--model", probe_model, "Model exercised by detect checks");

  // gen-fixtures
  auto* gen = app.add_subcommand("gen-fixtures", "Write synthetic recordings, traces and tables");
  add_config(gen);
  std::string gen_out;
  uint64_t gen_seed = 0;
  double gen_duration = 10.0;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--seed", gen_seed, "Noise seed")->capture_default_str();
  gen->add_option("--duration", gen_duration, "Recording length in seconds")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  Config config;
  Overrides o;
  if (*fuse) {
    o.Add("registration.homography", homography);
    if (jobs > 0) o.Add("dataset.jobs", std::to_string(jobs));
    if (int rc = OpenConfig(config, config_path, o, "fuse")) return rc;
    char* text = nullptr;
    const af_status s = af_fuse(config.get(), rgb_dir.c_str(), lwir_dir.c_str(),
                                OrNull(labels_dir), levels.c_str(), fuse_out.c_str(), &text);
    return PrintOwned(s, text, "fuse");
  }
  if (*split) {
    o.Add("dataset.train_fraction", split_fraction);
    o.Add("dataset.seed", split_seed);
    o.Add("dataset.stratify", stratify);
    if (group) o.Add("dataset.group_by_recording", "true");
    if (int rc = OpenConfig(config, config_path, o, "split")) return rc;
    char* text = nullptr;
    const af_status s = af_split(config.get(), split_manifest.c_str(), OrNull(split_out), &text);
    return PrintOwned(s, text, "split");
  }
  if (*categorize) {
    o.Add("illumination.hysteresis_margin", margin);
    if (int rc = OpenConfig(config, config_path, o, "categorize")) return rc;
    char* text = nullptr;
    const af_status s = af_categorize_trace(config.get(), lux_trace.c_str(), &text);
    return PrintOwned(s, text, "categorize");
  }
  if (*evaluate) {
    o.Add("evaluation.std", std_mode);
    if (!eval_registry.empty()) o.Add("models.registry", Absolute(eval_registry));
    if (int rc = OpenConfig(config, config_path, o, "evaluate")) return rc;
    char* text = nullptr;
    const af_status s = af_evaluate(config.get(), logs_dir.c_str(), eval_manifest.c_str(),
                                    eval_out.c_str(), &text);
    return PrintOwned(s, text, "evaluate");
  }
  if (*rank) {
    if (int rc = OpenConfig(config, config_path, o, "rank")) return rc;
    char* text = nullptr;
    const af_status s =
        af_rank(stats_csv.c_str(), rank_category.c_str(), OrNull(rank_out), &text);
    return PrintOwned(s, text, "rank");
  }
  if (*run) {
    o.Add("detector.backend", backend);
    o.Add("detector.endpoint", endpoint);
    if (!mock_table.empty()) o.Add("detector.mock_table", Absolute(mock_table));
    if (!run_registry.empty()) o.Add("models.registry", Absolute(run_registry));
    if (!rankings.empty()) o.Add("models.rankings", Absolute(rankings));
    o.Add("pipeline.trial_duration_s", duration);
    o.Add("detector.seed", seed);
    o.Add("detector.noise_sigma", noise);
    if (threaded) o.Add("pipeline.threaded", "true");
    if (int rc = OpenConfig(config, config_path, o, "run")) return rc;
    char* text = nullptr;
    const af_status s =
        af_run(config.get(), source_dir.c_str(), OrNull(recording), run_out.c_str(), &text);
    return PrintOwned(s, text, "run");
  }
  if (*check) {
    if (int rc = OpenConfig(config, config_path, o, "protocol-check")) return rc;
    char* text = nullptr;
    size_t violations = 0;
    const af_status s = af_protocol_check(check_endpoint.c_str(), timeout_ms,
                                          OrNull(probe_model), &violations, &text);
    if (int rc = PrintOwned(s, text, "protocol-check")) return rc;
    return violations == 0 ? 0 : kExitValidation;
  }
  if (*gen) {
    if (int rc = OpenConfig(config, config_path, o, "gen-fixtures")) return rc;
    char* text = nullptr;
    const af_status s = af_gen_fixtures(gen_out.c_str(), gen_seed, gen_duration, &text);
    return PrintOwned(s, text, "gen-fixtures");
  }
  return kExitValidation;
}
