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

#ifndef ADAPTFUSE_TURRET_HPP_
#define ADAPTFUSE_TURRET_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adaptfuse/detection.hpp"

namespace adaptfuse {

// Proportional pan/tilt law with deadband and per-cycle saturation. Defaults
// assume 200-step motors at 1/16 microstepping.
struct TargetingConfig {
  double hfov_deg = 60.0;
  double vfov_deg = 40.0;
  int steps_per_rev = 3200;
  int deadband_px = 8;
  double gain = 1.0;
  int max_steps_per_cycle = 200;

  double DegreesPerStep() const { return 360.0 / steps_per_rev; }
  // Throws kConfig on any non-positive field, gain > 1, or a deadband that is
  // not smaller than half the frame width.
  void Validate(int frame_width) const;
};

// Signed pixel offset of the target from the frame center (+dx: right of
// center, +dy: below center).
struct PixelError {
  double dx = 0.0;
  double dy = 0.0;
  int frame_width = 0;
  int frame_height = 0;
};

struct PanTiltCommand {
  int pan_steps = 0;
  int tilt_steps = 0;

  bool IsZero() const { return pan_steps == 0 && tilt_steps == 0; }
  friend bool operator==(const PanTiltCommand&, const PanTiltCommand&) = default;
};

PixelError TargetError(const Detection& best, int frame_width, int frame_height);
PanTiltCommand ErrorToCommand(const PixelError& error, const TargetingConfig& config);

// Simulated turret. Angles are derived from the accumulated step totals, so
// angle == initial + DegreesPerStep() * sum(steps) holds exactly.
struct TurretState {
  double initial_pan_deg = 0.0;
  double initial_tilt_deg = 0.0;
  int64_t pan_steps_total = 0;
  int64_t tilt_steps_total = 0;
  std::vector<PanTiltCommand> history;

  double pan_deg(const TargetingConfig& c) const {
    return initial_pan_deg + c.DegreesPerStep() * static_cast<double>(pan_steps_total);
  }
  double tilt_deg(const TargetingConfig& c) const {
    return initial_tilt_deg + c.DegreesPerStep() * static_cast<double>(tilt_steps_total);
  }
};

TurretState Simulate(const TurretState& state, const PanTiltCommand& command,
                     const TargetingConfig& config);

// Hardware boundary. A GPIO driver implements the same two calls.
class Actuator {
 public:
  virtual ~Actuator() = default;
  virtual void IssueSteps(const PanTiltCommand& command) = 0;
  virtual void Halt() = 0;
};

class SimulatedActuator : public Actuator {
 public:
  explicit SimulatedActuator(TargetingConfig config, TurretState initial = {})
      : config_(config), state_(std::move(initial)) {}

  void IssueSteps(const PanTiltCommand& command) override;
  void Halt() override { halted_ = true; }

  const TurretState& state() const { return state_; }
  const TargetingConfig& config() const { return config_; }
  bool halted() const { return halted_; }

 private:
  TargetingConfig config_;
  TurretState state_;
  bool halted_ = false;
};

// Closed loop against a static target at the given absolute angles: the
// detected center is recomputed from the turret pose each cycle. Returns the
// number of cycles until the target sits inside the deadband, or -1 if it
// does not within `max_cycles`.
int CyclesToConverge(double target_pan_deg, double target_tilt_deg,
                     const TargetingConfig& config, int frame_width,
                     int frame_height, int max_cycles, TurretState* final_state);

struct CommandTraceRow {
  int64_t cycle = 0;
  std::string frame_id;
  double dx_px = 0.0;
  double dy_px = 0.0;
  PanTiltCommand command;
  double pan_angle_deg = 0.0;
  double tilt_angle_deg = 0.0;
};

// Columns cycle,frame_id,dx_px,dy_px,pan_steps,tilt_steps,pan_angle_deg,
// tilt_angle_deg.
std::string CommandTraceCsv(const std::vector<CommandTraceRow>& rows);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_TURRET_HPP_
