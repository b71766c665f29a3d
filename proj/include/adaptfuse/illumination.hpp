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

#ifndef ADAPTFUSE_ILLUMINATION_HPP_
#define ADAPTFUSE_ILLUMINATION_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adaptfuse {

enum class IlluminationCategory { kFullLight, kDimLight, kNoLight };

inline constexpr double kFullLightAboveLux = 1000.0;
inline constexpr double kNoLightBelowLux = 10.0;

const char* CategoryName(IlluminationCategory category);  // "full_light", ...
// Accepts full_light/dim_light/no_light plus the short forms full/dim/no.
IlluminationCategory ParseCategory(const std::string& text);
std::vector<IlluminationCategory> AllCategories();

struct LuxReading {
  double lux = 0.0;
  int64_t timestamp_ms = 0;
};

// lux > 1000 is full light, 10 <= lux <= 1000 dim, lux < 10 no light.
// Throws kInvalidArgument for negative or non-finite input.
IlluminationCategory Categorize(double lux);

struct SwitchEvent {
  std::optional<IlluminationCategory> from;  // unset for the initial event
  IlluminationCategory to;
  int64_t timestamp_ms;
  double lux;

  friend bool operator==(const SwitchEvent&, const SwitchEvent&) = default;
};

// Model-switching state. With hysteresis_margin == 0 the current category is
// always Categorize(latest reading). With a positive margin, leaving the
// current category requires the reading to sit more than `margin` lux past
// the boundary being crossed.
struct SwitchState {
  std::optional<IlluminationCategory> current;
  double hysteresis_margin = 0.0;
  int64_t last_switch_timestamp_ms = 0;
};

struct StepResult {
  SwitchState state;
  std::optional<SwitchEvent> event;
};

StepResult Step(const SwitchState& state, const LuxReading& reading);

// Replays a whole trace from an unset state.
std::vector<SwitchEvent> ReplayTrace(const std::vector<LuxReading>& trace,
                                     double hysteresis_margin);

// CSV with columns timestamp_ms,lux.
std::vector<LuxReading> ReadLuxTrace(const std::filesystem::path& path);
void WriteLuxTrace(const std::vector<LuxReading>& trace,
                   const std::filesystem::path& path);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_ILLUMINATION_HPP_
