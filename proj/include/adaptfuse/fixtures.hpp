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

#ifndef ADAPTFUSE_FIXTURES_HPP_
#define ADAPTFUSE_FIXTURES_HPP_

#include <cstdint>
#include <utility>

#include "adaptfuse/frame.hpp"

namespace adaptfuse {

// A flat scene with one warm disc (the target). The same geometry is drawn
// into the RGB and LWIR frames.
struct SceneSpec {
  int width = 64;
  int height = 64;
  Rgb8 rgb_background = {96, 96, 96};
  uint8_t lwir_background = 20;
  // Disc center in pixel coordinates and radius in pixels. Radius 0 draws
  // no disc.
  int center_x = 32;
  int center_y = 32;
  int radius = 8;
  Rgb8 target_rgb = {240, 240, 240};
  uint8_t target_lwir = 220;
  int64_t timestamp_ms = 0;
};

// Fixed synthetic thermal palette: maps an intensity to a palettized color.
Rgb8 ThermalPalette(uint8_t intensity);

// Deterministic (RGB, LWIR) pair. Throws kFixture if the disc leaves the
// frame or the dimensions are not positive.
std::pair<Frame, Frame> GenerateSyntheticPair(const SceneSpec& spec);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_FIXTURES_HPP_
