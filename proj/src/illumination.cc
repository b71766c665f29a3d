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

#include "adaptfuse/illumination.hpp"

#include <cmath>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"

namespace adaptfuse {

const char* CategoryName(IlluminationCategory category) {
  switch (category) {
    case IlluminationCategory::kFullLight: return "full_light";
    case IlluminationCategory::kDimLight: return "dim_light";
    case IlluminationCategory::kNoLight: return "no_light";
  }
  return "?";
}

IlluminationCategory ParseCategory(const std::string& text) {
  const std::string t = Trim(text);
  if (t == "full_light" || t == "full" || t == "FullLight") {
    return IlluminationCategory::kFullLight;
  }
  if (t == "dim_light" || t == "dim" || t == "DimLight") {
    return IlluminationCategory::kDimLight;
  }
  if (t == "no_light" || t == "no" || t == "NoLight") {
    return IlluminationCategory::kNoLight;
  }
  Fail(ErrorCode::kParse, "unknown illumination category '" + t + "'");
}

std::vector<IlluminationCategory> AllCategories() {
  return {IlluminationCategory::kFullLight, IlluminationCategory::kDimLight,
          IlluminationCategory::kNoLight};
}

IlluminationCategory Categorize(double lux) {
  if (!(lux >= 0.0) || !std::isfinite(lux)) {
    Fail(ErrorCode::kInvalidArgument,
         "lux must be a non-negative finite number, got " + FormatDouble(lux));
  }
  if (lux > kFullLightAboveLux) return IlluminationCategory::kFullLight;
  if (lux >= kNoLightBelowLux) return IlluminationCategory::kDimLight;
  return IlluminationCategory::kNoLight;
}

namespace {

int Brightness(IlluminationCategory c) {
  switch (c) {
    case IlluminationCategory::kNoLight: return 0;
    case IlluminationCategory::kDimLight: return 1;
    case IlluminationCategory::kFullLight: return 2;
  }
  return 0;
}

IlluminationCategory FromBrightness(int b) {
  return b <= 0 ? IlluminationCategory::kNoLight
                : (b == 1 ? IlluminationCategory::kDimLight
                          : IlluminationCategory::kFullLight);
}

// Walks one boundary at a time from `current` toward `target`, stopping at
// the first boundary the reading does not clear by more than `margin`.
IlluminationCategory ApplyHysteresis(IlluminationCategory current,
                                     IlluminationCategory target, double lux,
                                     double margin) {
  int b = Brightness(current);
  const int goal = Brightness(target);
  while (b != goal) {
    if (goal > b) {
      const double boundary = b == 0 ? kNoLightBelowLux : kFullLightAboveLux;
      if (!(lux - boundary > margin)) break;
      ++b;
    } else {
      const double boundary = b == 2 ? kFullLightAboveLux : kNoLightBelowLux;
      if (!(boundary - lux > margin)) break;
      --b;
    }
  }
  return FromBrightness(b);
}

}  // namespace

StepResult Step(const SwitchState& state, const LuxReading& reading) {
  const IlluminationCategory raw = Categorize(reading.lux);
  StepResult result{state, std::nullopt};
  if (!state.current.has_value()) {
    result.state.current = raw;
    result.state.last_switch_timestamp_ms = reading.timestamp_ms;
    result.event = SwitchEvent{std::nullopt, raw, reading.timestamp_ms, reading.lux};
    return result;
  }
  const IlluminationCategory current = *state.current;
  IlluminationCategory next = raw;
  if (state.hysteresis_margin > 0.0 && raw != current) {
    next = ApplyHysteresis(current, raw, reading.lux, state.hysteresis_margin);
  }
  if (next != current) {
    result.state.current = next;
    result.state.last_switch_timestamp_ms = reading.timestamp_ms;
    result.event = SwitchEvent{current, next, reading.timestamp_ms, reading.lux};
  }
  return result;
}

std::vector<SwitchEvent> ReplayTrace(const std::vector<LuxReading>& trace,
                                     double hysteresis_margin) {
  SwitchState state;
  state.hysteresis_margin = hysteresis_margin;
  std::vector<SwitchEvent> events;
  for (const auto& reading : trace) {
    auto step = Step(state, reading);
    state = step.state;
    if (step.event) events.push_back(*step.event);
  }
  return events;
}

std::vector<LuxReading> ReadLuxTrace(const std::filesystem::path& path) {
  const auto table = CsvTable::Read(path, {"timestamp_ms", "lux"});
  std::vector<LuxReading> trace;
  trace.reserve(table.size());
  for (size_t i = 0; i < table.size(); ++i) {
    LuxReading r{table.Number(i, "lux"), table.Integer(i, "timestamp_ms")};
    if (r.lux < 0.0) {
      Fail(ErrorCode::kInvalidArgument,
           path.string() + ":" + std::to_string(table.LineOf(i)) +
               ": negative lux " + FormatDouble(r.lux));
    }
    trace.push_back(r);
  }
  return trace;
}

void WriteLuxTrace(const std::vector<LuxReading>& trace,
                   const std::filesystem::path& path) {
  CsvTable table({"timestamp_ms", "lux"});
  for (const auto& r : trace) {
    table.AddRow({std::to_string(r.timestamp_ms), FormatDouble(r.lux)});
  }
  table.Write(path);
}

}  // namespace adaptfuse
