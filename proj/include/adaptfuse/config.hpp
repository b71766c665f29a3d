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

#ifndef ADAPTFUSE_CONFIG_HPP_
#define ADAPTFUSE_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "adaptfuse/dataset.hpp"
#include "adaptfuse/detection.hpp"
#include "adaptfuse/evaluation.hpp"
#include "adaptfuse/fusion.hpp"
#include "adaptfuse/illumination.hpp"
#include "adaptfuse/turret.hpp"

namespace adaptfuse {

enum class BackendKind { kMock, kRemote };

// Everything the tools read from the INI config file. Defaults here are the
// documented defaults; see config/adaptfuse.ini.
struct PipelineConfig {
  // [models]
  std::filesystem::path registry_path;  // empty: built-in 35-model registry
  std::filesystem::path rankings_path;  // empty: use active_models
  std::map<IlluminationCategory, std::string> active_models = {
      {IlluminationCategory::kFullLight, "full_f80"},
      {IlluminationCategory::kDimLight, "dim_f90"},
      {IlluminationCategory::kNoLight, "no_f40"},
  };

  // [registration]
  Homography homography = Homography::Identity();

  // [detector]
  BackendKind backend = BackendKind::kMock;
  std::string endpoint = "http://127.0.0.1:8000";
  int timeout_ms = 2000;
  std::filesystem::path mock_table_path;
  MockOptions mock;

  // [spurious]
  SpuriousPolicy spurious;

  // [turret]
  TargetingConfig targeting;

  // [illumination]
  double hysteresis_margin = 0.0;

  // [pipeline]
  double trial_duration_s = 10.0;
  bool threaded = false;
  bool realtime_pacing = false;
  bool log_timing = false;

  // [evaluation]
  StdMode std_mode = StdMode::kPopulation;

  // [dataset]
  SplitOptions split;
  int jobs = 1;

  // Throws kConfig on unknown sections/keys or invalid values. Relative
  // paths resolve against the config file's directory.
  static PipelineConfig Load(const std::filesystem::path& path);
  static PipelineConfig Parse(const std::string& text,
                              const std::filesystem::path& base_dir);
};

}  // namespace adaptfuse

#endif  // ADAPTFUSE_CONFIG_HPP_
