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

#ifndef ADAPTFUSE_GEN_FIXTURES_HPP_
#define ADAPTFUSE_GEN_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "adaptfuse/detection.hpp"
#include "adaptfuse/fusion.hpp"
#include "adaptfuse/illumination.hpp"

namespace adaptfuse {

struct FixtureOptions {
  int width = 64;
  int height = 64;
  int fps = 10;
  double duration_s = 10.0;
  uint64_t seed = 0;
  // Per-frame noise in the synthesized evaluation trials.
  double trial_noise_sigma = 0.02;
  int frames_per_trial = 20;
};

struct FixtureSummary {
  size_t recordings = 0;
  size_t frames = 0;
  size_t mock_entries = 0;
  size_t trials = 0;
};

// Tabulated mock confidence. Anchored on the measured means where those
// exist (dim 90/80/70, full 80, no 40/50, pure RGB and pure LWIR in no light)
// and smooth elsewhere. White carries no color offset.
double FixtureConfidence(FusionLevel level, IlluminationCategory category,
                         const std::string& color);
MockConfidenceTable FixtureMockTable();

// Writes under `out`:
//   dataset/<recording>/{rgb,lwir,labels}/ + meta.csv   replay recordings
//   lux/<recording>.csv                                 lux traces
//   mock_table.csv, registry.json, adaptfuse.ini
//   trials/manifest.csv + trials/logs/<trial_id>.csv    evaluation input
FixtureSummary GenerateFixtures(const std::filesystem::path& out,
                                const FixtureOptions& options);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_GEN_FIXTURES_HPP_
