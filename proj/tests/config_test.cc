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

#include "adaptfuse/config.hpp"

#include <string>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace adaptfuse {
namespace {

using testing::TempDir;

ErrorCode ParseError(const std::string& text) {
  try {
    PipelineConfig::Parse(text, "/base");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ErrorCode::kInternal;
}

void ExpectSameSettings(const PipelineConfig& a, const PipelineConfig& b) {
  EXPECT_EQ(a.registry_path, b.registry_path);
  EXPECT_EQ(a.rankings_path, b.rankings_path);
  EXPECT_EQ(a.active_models, b.active_models);
  EXPECT_EQ(a.homography.coefficients(), b.homography.coefficients());
  EXPECT_EQ(a.backend, b.backend);
  EXPECT_EQ(a.endpoint, b.endpoint);
  EXPECT_EQ(a.timeout_ms, b.timeout_ms);
  EXPECT_EQ(a.mock_table_path, b.mock_table_path);
  EXPECT_EQ(a.mock.noise_sigma, b.mock.noise_sigma);
  EXPECT_EQ(a.mock.seed, b.mock.seed);
  EXPECT_EQ(a.mock.latency_ms, b.mock.latency_ms);
  EXPECT_EQ(a.spurious.confidence_floor, b.spurious.confidence_floor);
  EXPECT_EQ(a.spurious.max_jump, b.spurious.max_jump);
  EXPECT_EQ(a.spurious.iou_floor, b.spurious.iou_floor);
  EXPECT_EQ(a.targeting.hfov_deg, b.targeting.hfov_deg);
  EXPECT_EQ(a.targeting.vfov_deg, b.targeting.vfov_deg);
  EXPECT_EQ(a.targeting.steps_per_rev, b.targeting.steps_per_rev);
  EXPECT_EQ(a.targeting.deadband_px, b.targeting.deadband_px);
  EXPECT_EQ(a.targeting.gain, b.targeting.gain);
  EXPECT_EQ(a.targeting.max_steps_per_cycle, b.targeting.max_steps_per_cycle);
  EXPECT_EQ(a.hysteresis_margin, b.hysteresis_margin);
  EXPECT_EQ(a.trial_duration_s, b.trial_duration_s);
  EXPECT_EQ(a.threaded, b.threaded);
  EXPECT_EQ(a.realtime_pacing, b.realtime_pacing);
  EXPECT_EQ(a.log_timing, b.log_timing);
  EXPECT_EQ(a.std_mode, b.std_mode);
  EXPECT_EQ(a.split.train_fraction, b.split.train_fraction);
  EXPECT_EQ(a.split.seed, b.split.seed);
  EXPECT_EQ(a.split.group_by_recording, b.split.group_by_recording);
  EXPECT_EQ(a.split.stratify, b.split.stratify);
  EXPECT_EQ(a.jobs, b.jobs);
}

TEST(PipelineConfigTest, EmptyTextGivesDefaults) {
  const auto c = PipelineConfig::Parse("", "/base");
  ExpectSameSettings(c, PipelineConfig{});
  EXPECT_EQ(c.active_models.at(IlluminationCategory::kDimLight), "dim_f90");
  EXPECT_EQ(c.targeting.steps_per_rev, 3200);
}

TEST(PipelineConfigTest, ShippedExampleSpellsOutTheDefaults) {
  const auto c = PipelineConfig::Load(ADAPTFUSE_EXAMPLE_CONFIG);
  ExpectSameSettings(c, PipelineConfig{});
}

TEST(PipelineConfigTest, ReadsEverySection) {
  const auto c = PipelineConfig::Parse(
      "[models]\nregistry = reg/registry.json\nrankings = /abs/rankings.csv\n"
      "no_light = no_f50\n"
      "[registration]\nhomography = 1,0,10, 0,1,0, 0,0,1\n"
      "[detector]\nbackend = remote\nendpoint = http://10.0.0.2:9000\ntimeout_ms = 500\n"
      "noise_sigma = 0.02\nseed = 7\nlatency_ms = 4\n"
      "[spurious]\nconfidence_floor = 0.4\nmax_jump = 0.2\niou_floor = 0.1\n"
      "[turret]\nhfov_deg = 70\ngain = 0.5\ndeadband_px = 4\n"
      "[illumination]\nhysteresis_margin = 5\n"
      "[pipeline]\ntrial_duration_s = 3.5\nthreaded = yes\nlog_timing = 1\n"
      "[evaluation]\nstd = sample\n"
      "[dataset]\ntrain_fraction = 0.8\nseed = 3\ngroup_by_recording = true\n"
      "stratify = category\njobs = 4\n",
      "/base");
  EXPECT_EQ(c.registry_path, "/base/reg/registry.json");
  EXPECT_EQ(c.rankings_path, "/abs/rankings.csv");
  EXPECT_EQ(c.active_models.at(IlluminationCategory::kNoLight), "no_f50");
  EXPECT_EQ(c.active_models.at(IlluminationCategory::kFullLight), "full_f80");
  EXPECT_EQ(c.homography.coefficients()[2], 10.0);
  EXPECT_EQ(c.backend, BackendKind::kRemote);
  EXPECT_EQ(c.endpoint, "http://10.0.0.2:9000");
  EXPECT_EQ(c.timeout_ms, 500);
  EXPECT_EQ(c.mock.noise_sigma, 0.02);
  EXPECT_EQ(c.mock.seed, 7u);
  EXPECT_EQ(c.spurious.confidence_floor, 0.4);
  EXPECT_EQ(c.targeting.hfov_deg, 70.0);
  EXPECT_EQ(c.targeting.gain, 0.5);
  EXPECT_EQ(c.hysteresis_margin, 5.0);
  EXPECT_EQ(c.trial_duration_s, 3.5);
  EXPECT_TRUE(c.threaded);
  EXPECT_TRUE(c.log_timing);
  EXPECT_FALSE(c.realtime_pacing);
  EXPECT_EQ(c.std_mode, StdMode::kSample);
  EXPECT_EQ(c.split.train_fraction, 0.8);
  EXPECT_TRUE(c.split.group_by_recording);
  EXPECT_EQ(c.split.stratify, Stratify::kCategory);
  EXPECT_EQ(c.jobs, 4);
}

TEST(PipelineConfigTest, InvalidInputIsAConfigError) {
  const char* cases[] = {
      "[modles]\nregistry = x\n",
      "[models]\nregistri = x\n",
      "[detector]\nbackend = grpc\n",
      "[detector]\ntimeout_ms = 0\n",
      "[detector]\ntimeout_ms = soon\n",
      "[detector]\nnoise_sigma = -0.1\n",
      "[turret]\ngain = 1.5\n",
      "[turret]\nsteps_per_rev = 0\n",
      "[illumination]\nhysteresis_margin = -1\n",
      "[pipeline]\nthreaded = maybe\n",
      "[pipeline]\ntrial_duration_s = 0\n",
      "[evaluation]\nstd = robust\n",
      "[dataset]\ntrain_fraction = 1\n",
      "[dataset]\nstratify = size\n",
      "[dataset]\njobs = 0\n",
      "[registration]\nhomography = 1 0 0 0 1 0\n",
      "[registration]\nhomography = 0 0 0 0 0 0 0 0 1\n",
      "[models\n",
  };
  for (const char* text : cases) EXPECT_EQ(ParseError(text), ErrorCode::kConfig) << text;
}

TEST(PipelineConfigTest, LoadResolvesPathsAgainstTheFileAndNamesIt) {
  TempDir dir;
  WriteTextFile(dir / "a.ini", "[detector]\nmock_table = tables/mock.csv\n");
  EXPECT_EQ(PipelineConfig::Load(dir / "a.ini").mock_table_path,
            dir.path() / "tables" / "mock.csv");
  WriteTextFile(dir / "b.ini", "[bogus]\nkey = 1\n");
  try {
    PipelineConfig::Load(dir / "b.ini");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("b.ini"), std::string::npos);
  }
  EXPECT_THROW(PipelineConfig::Load(dir / "missing.ini"), Error);
}

}  // namespace
}  // namespace adaptfuse
