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

#include "adaptfuse/fixtures.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "adaptfuse/error.hpp"

namespace adaptfuse {

Rgb8 ThermalPalette(uint8_t intensity) {
  // Piecewise-linear black -> purple -> orange -> white ramp.
  const int v = intensity;
  const int r = std::min(255, v * 2);
  const int g = v < 128 ? 0 : (v - 128) * 2;
  const int b = v < 64 ? v * 2 : (v < 128 ? 255 - (v - 64) * 2 : (v >= 192 ? (v - 192) * 4 : 0));
  return {static_cast<uint8_t>(r), static_cast<uint8_t>(std::min(255, g)),
          static_cast<uint8_t>(std::clamp(b, 0, 255))};
}

std::pair<Frame, Frame> GenerateSyntheticPair(const SceneSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    Fail(ErrorCode::kFixture, "scene dimensions must be positive");
  }
  if (spec.radius < 0) Fail(ErrorCode::kFixture, "disc radius is negative");
  if (spec.radius > 0 &&
      (spec.center_x - spec.radius < 0 || spec.center_y - spec.radius < 0 ||
       spec.center_x + spec.radius > spec.width - 1 ||
       spec.center_y + spec.radius > spec.height - 1)) {
    Fail(ErrorCode::kFixture,
         "disc at (" + std::to_string(spec.center_x) + ", " +
             std::to_string(spec.center_y) + ") radius " +
             std::to_string(spec.radius) + " exceeds " +
             std::to_string(spec.width) + "x" + std::to_string(spec.height));
  }

  const size_t n = static_cast<size_t>(spec.width) * spec.height * 3;
  std::vector<uint8_t> rgb(n), lwir(n);
  const Rgb8 lwir_bg = ThermalPalette(spec.lwir_background);
  const Rgb8 lwir_fg = ThermalPalette(spec.target_lwir);
  const long r2 = static_cast<long>(spec.radius) * spec.radius;
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      const long dx = x - spec.center_x;
      const long dy = y - spec.center_y;
      const bool inside = spec.radius > 0 && dx * dx + dy * dy <= r2;
      const Rgb8& c_rgb = inside ? spec.target_rgb : spec.rgb_background;
      const Rgb8& c_lwir = inside ? lwir_fg : lwir_bg;
      const size_t i = (static_cast<size_t>(y) * spec.width + x) * 3;
      for (int c = 0; c < 3; ++c) {
        rgb[i + c] = c_rgb[c];
        lwir[i + c] = c_lwir[c];
      }
    }
  }
  return {Frame(spec.width, spec.height, Modality::kRgb, std::move(rgb),
                spec.timestamp_ms),
          Frame(spec.width, spec.height, Modality::kLwir, std::move(lwir),
                spec.timestamp_ms)};
}

}  // namespace adaptfuse
