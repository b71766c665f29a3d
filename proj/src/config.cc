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

#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"

namespace adaptfuse {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& KnownKeys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"models", {"registry", "rankings", "full_light", "dim_light", "no_light"}},
      {"registration", {"homography"}},
      {"detector", {"backend", "endpoint", "timeout_ms", "mock_table", "noise_sigma",
                    "seed", "latency_ms"}},
      {"spurious", {"confidence_floor", "max_jump", "iou_floor"}},
      {"turret", {"hfov_deg", "vfov_deg", "steps_per_rev", "deadband_px", "gain",
                  "max_steps_per_cycle"}},
      {"illumination", {"hysteresis_margin"}},
      {"pipeline", {"trial_duration_s", "threaded", "realtime_pacing", "log_timing"}},
      {"evaluation", {"std"}},
      {"dataset", {"train_fraction", "seed", "group_by_recording", "stratify", "jobs"}},
  };
  return keys;
}

class Section {
 public:
  Section(const pt::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool Has(const std::string& key) const { return tree_ && tree_->count(key); }
  std::string Raw(const std::string& key) const {
    return Trim(tree_->get<std::string>(key));
  }
  std::string Where(const std::string& key) const { return "[" + name_ + "] " + key; }

  void String(const std::string& key, std::string* out) const {
    if (Has(key)) *out = Raw(key);
  }
  void Double(const std::string& key, double* out) const {
    if (Has(key)) *out = ParseDouble(Raw(key), Where(key));
  }
  void Int(const std::string& key, int* out) const {
    if (Has(key)) *out = static_cast<int>(ParseInteger(Raw(key), Where(key)));
  }
  void Uint64(const std::string& key, uint64_t* out) const {
    if (Has(key)) *out = static_cast<uint64_t>(ParseInteger(Raw(key), Where(key)));
  }
  void Bool(const std::string& key, bool* out) const {
    if (!Has(key)) return;
    const std::string v = Raw(key);
    if (v == "true" || v == "1" || v == "yes") {
      *out = true;
    } else if (v == "false" || v == "0" || v == "no") {
      *out = false;
    } else {
      Fail(ErrorCode::kConfig, Where(key) + ": expected a boolean, got '" + v + "'");
    }
  }
  void Path(const std::string& key, const std::filesystem::path& base,
            std::filesystem::path* out) const {
    if (!Has(key)) return;
    const std::string v = Raw(key);
    if (v.empty()) {
      out->clear();
      return;
    }
    std::filesystem::path p(v);
    *out = p.is_absolute() ? p : (base / p).lexically_normal();
  }

 private:
  const pt::ptree* tree_;
  std::string name_;
};

}  // namespace

PipelineConfig PipelineConfig::Load(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return Parse(text, path.has_parent_path() ? path.parent_path() : ".");
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

PipelineConfig PipelineConfig::Parse(const std::string& text,
                                     const std::filesystem::path& base_dir) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    Fail(ErrorCode::kConfig, std::string("malformed config: ") + e.what());
  }
  for (const auto& [section, body] : root) {
    auto it = KnownKeys().find(section);
    if (it == KnownKeys().end()) {
      Fail(ErrorCode::kConfig, "unknown config section [" + section + "]");
    }
    if (body.empty() && !body.data().empty()) {
      Fail(ErrorCode::kConfig, "key '" + section + "' must live inside a section");
    }
    for (const auto& [key, value] : body) {
      (void)value;
      if (!it->second.count(key)) {
        Fail(ErrorCode::kConfig, "unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
  auto section = [&root](const std::string& name) {
    auto child = root.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  PipelineConfig c;
  try {
    const Section models = section("models");
    models.Path("registry", base_dir, &c.registry_path);
    models.Path("rankings", base_dir, &c.rankings_path);
    models.String("full_light", &c.active_models[IlluminationCategory::kFullLight]);
    models.String("dim_light", &c.active_models[IlluminationCategory::kDimLight]);
    models.String("no_light", &c.active_models[IlluminationCategory::kNoLight]);

    const Section reg = section("registration");
    if (reg.Has("homography")) c.homography = Homography::Parse(reg.Raw("homography"));

    const Section det = section("detector");
    if (det.Has("backend")) {
      const std::string b = det.Raw("backend");
      if (b == "mock") {
        c.backend = BackendKind::kMock;
      } else if (b == "remote") {
        c.backend = BackendKind::kRemote;
      } else {
        Fail(ErrorCode::kConfig, "[detector] backend must be mock or remote, got '" + b + "'");
      }
    }
    det.String("endpoint", &c.endpoint);
    det.Int("timeout_ms", &c.timeout_ms);
    det.Path("mock_table", base_dir, &c.mock_table_path);
    det.Double("noise_sigma", &c.mock.noise_sigma);
    det.Uint64("seed", &c.mock.seed);
    det.Double("latency_ms", &c.mock.latency_ms);

    const Section sp = section("spurious");
    sp.Double("confidence_floor", &c.spurious.confidence_floor);
    sp.Double("max_jump", &c.spurious.max_jump);
    sp.Double("iou_floor", &c.spurious.iou_floor);

    const Section tu = section("turret");
    tu.Double("hfov_deg", &c.targeting.hfov_deg);
    tu.Double("vfov_deg", &c.targeting.vfov_deg);
    tu.Int("steps_per_rev", &c.targeting.steps_per_rev);
    tu.Int("deadband_px", &c.targeting.deadband_px);
    tu.Double("gain", &c.targeting.gain);
    tu.Int("max_steps_per_cycle", &c.targeting.max_steps_per_cycle);

    section("illumination").Double("hysteresis_margin", &c.hysteresis_margin);

    const Section pl = section("pipeline");
    pl.Double("trial_duration_s", &c.trial_duration_s);
    pl.Bool("threaded", &c.threaded);
    pl.Bool("realtime_pacing", &c.realtime_pacing);
    pl.Bool("log_timing", &c.log_timing);

    const Section ev = section("evaluation");
    if (ev.Has("std")) {
      const std::string m = ev.Raw("std");
      if (m == "population") {
        c.std_mode = StdMode::kPopulation;
      } else if (m == "sample") {
        c.std_mode = StdMode::kSample;
      } else {
        Fail(ErrorCode::kConfig, "[evaluation] std must be population or sample");
      }
    }

    const Section ds = section("dataset");
    ds.Double("train_fraction", &c.split.train_fraction);
    ds.Uint64("seed", &c.split.seed);
    ds.Bool("group_by_recording", &c.split.group_by_recording);
    if (ds.Has("stratify")) {
      const std::string s = ds.Raw("stratify");
      if (s == "none") {
        c.split.stratify = Stratify::kNone;
      } else if (s == "color") {
        c.split.stratify = Stratify::kColor;
      } else if (s == "category") {
        c.split.stratify = Stratify::kCategory;
      } else {
        Fail(ErrorCode::kConfig, "[dataset] stratify must be none, color or category");
      }
    }
    ds.Int("jobs", &c.jobs);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }

  if (c.timeout_ms <= 0) Fail(ErrorCode::kConfig, "[detector] timeout_ms must be positive");
  if (c.mock.noise_sigma < 0.0) Fail(ErrorCode::kConfig, "[detector] noise_sigma must be >= 0");
  if (c.hysteresis_margin < 0.0) {
    Fail(ErrorCode::kConfig, "[illumination] hysteresis_margin must be >= 0");
  }
  if (!(c.trial_duration_s > 0.0)) {
    Fail(ErrorCode::kConfig, "[pipeline] trial_duration_s must be positive");
  }
  if (!(c.split.train_fraction > 0.0 && c.split.train_fraction < 1.0)) {
    Fail(ErrorCode::kConfig, "[dataset] train_fraction must lie in (0, 1)");
  }
  if (c.jobs < 1) Fail(ErrorCode::kConfig, "[dataset] jobs must be >= 1");
  c.targeting.Validate(0);
  return c;
}

}  // namespace adaptfuse
