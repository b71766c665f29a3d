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

#include "adaptfuse/turret.hpp"

#include <algorithm>
#include <cmath>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"

namespace adaptfuse {

void TargetingConfig::Validate(int frame_width) const {
  if (!(hfov_deg > 0.0) || !(vfov_deg > 0.0)) Fail(ErrorCode::kConfig, "fields of view must be positive");
  if (steps_per_rev <= 0) Fail(ErrorCode::kConfig, "steps_per_rev must be positive");
  if (deadband_px <= 0) Fail(ErrorCode::kConfig, "deadband_px must be positive");
  if (!(gain > 0.0 && gain <= 1.0)) Fail(ErrorCode::kConfig, "gain must lie in (0, 1]");
  if (max_steps_per_cycle <= 0) Fail(ErrorCode::kConfig, "max_steps_per_cycle must be positive");
  if (frame_width > 0 && 2 * deadband_px >= frame_width) {
    Fail(ErrorCode::kConfig, "deadband_px must be smaller than half the frame width");
  }
}

PixelError TargetError(const Detection& best, int frame_width, int frame_height) {
  return {(best.bbox.cx - 0.5) * frame_width, (best.bbox.cy - 0.5) * frame_height,
          frame_width, frame_height};
}

namespace {

int AxisSteps(double error_px, int frame_extent, double fov_deg,
              const TargetingConfig& c) {
  if (std::abs(error_px) <= c.deadband_px || frame_extent <= 0) return 0;
  const double degrees = c.gain * error_px / frame_extent * fov_deg;
  const long steps = std::lround(degrees / c.DegreesPerStep());
  return static_cast<int>(
      std::clamp<long>(steps, -c.max_steps_per_cycle, c.max_steps_per_cycle));
}

}  // namespace

PanTiltCommand ErrorToCommand(const PixelError& error, const TargetingConfig& config) {
  return {AxisSteps(error.dx, error.frame_width, config.hfov_deg, config),
          AxisSteps(error.dy, error.frame_height, config.vfov_deg, config)};
}

TurretState Simulate(const TurretState& state, const PanTiltCommand& command,
                     const TargetingConfig& config) {
  (void)config;
  TurretState next = state;
  next.pan_steps_total += command.pan_steps;
  next.tilt_steps_total += command.tilt_steps;
  next.history.push_back(command);
  return next;
}

void SimulatedActuator::IssueSteps(const PanTiltCommand& command) {
  halted_ = false;
  state_ = Simulate(state_, command, config_);
}

int CyclesToConverge(double target_pan_deg, double target_tilt_deg,
                     const TargetingConfig& config, int frame_width,
                     int frame_height, int max_cycles, TurretState* final_state) {
  TurretState state;
  int result = -1;
  for (int cycle = 0; cycle <= max_cycles; ++cycle) {
    // Small-angle camera model: pixel offset proportional to angular offset.
    const double dx = (target_pan_deg - state.pan_deg(config)) / config.hfov_deg * frame_width;
    const double dy = (target_tilt_deg - state.tilt_deg(config)) / config.vfov_deg * frame_height;
    if (std::abs(dx) <= config.deadband_px && std::abs(dy) <= config.deadband_px) {
      result = cycle;
      break;
    }
    if (cycle == max_cycles) break;
    const auto cmd = ErrorToCommand({dx, dy, frame_width, frame_height}, config);
    state = Simulate(state, cmd, config);
  }
  if (final_state) *final_state = std::move(state);
  return result;
}

std::string CommandTraceCsv(const std::vector<CommandTraceRow>& rows) {
  CsvTable table({"cycle", "frame_id", "dx_px", "dy_px", "pan_steps", "tilt_steps",
                  "pan_angle_deg", "tilt_angle_deg"});
  for (const auto& r : rows) {
    table.AddRow({std::to_string(r.cycle), r.frame_id, FormatDouble(r.dx_px),
                  FormatDouble(r.dy_px), std::to_string(r.command.pan_steps),
                  std::to_string(r.command.tilt_steps), FormatDouble(r.pan_angle_deg),
                  FormatDouble(r.tilt_angle_deg)});
  }
  return table.ToString();
}

}  // namespace adaptfuse
