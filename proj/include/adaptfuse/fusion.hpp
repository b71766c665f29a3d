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

#ifndef ADAPTFUSE_FUSION_HPP_
#define ADAPTFUSE_FUSION_HPP_

#include <array>
#include <compare>
#include <string>
#include <vector>

#include "adaptfuse/frame.hpp"

namespace adaptfuse {

// Blend weight stored as an integer RGB percentage so that the eleven grid
// points 100, 90, ..., 0 are represented without floating-point drift.
class FusionLevel {
 public:
  // Throws kInvalidArgument unless rgb_percent is a multiple of 10 in [0, 100].
  explicit FusionLevel(int rgb_percent);

  int rgb_percent() const { return rgb_percent_; }
  int lwir_percent() const { return 100 - rgb_percent_; }
  double alpha() const { return rgb_percent_ / 100.0; }
  // "80/20" style label.
  std::string Label() const;

  auto operator<=>(const FusionLevel&) const = default;

 private:
  int rgb_percent_;
};

// All eleven levels, RGB-only first.
std::vector<FusionLevel> AllFusionLevels();

// Parses "all" or a comma-separated list of RGB percentages.
std::vector<FusionLevel> ParseFusionLevels(const std::string& text);

// Projective map from target (RGB grid) pixel coordinates to source (LWIR)
// pixel coordinates. Pixel centers sit on integer coordinates.
class Homography {
 public:
  // Row-major coefficients. The matrix is rescaled so the bottom-right
  // element is 1; throws kRegistration if that element is zero or the
  // determinant magnitude is at most 1e-12.
  explicit Homography(const std::array<double, 9>& coefficients);

  static Homography Identity();
  static Homography Translation(double tx, double ty);
  // Parses nine whitespace- or comma-separated decimals.
  static Homography Parse(const std::string& text);

  const std::array<double, 9>& coefficients() const { return m_; }
  double Determinant() const;
  bool IsIdentity() const;

  // Returns false when the point maps to infinity or behind the camera.
  bool Map(double x, double y, double* out_x, double* out_y) const;

  std::string ToString() const;

 private:
  std::array<double, 9> m_;
};

// Resamples an LWIR frame onto a target grid. Each target pixel p takes the
// bilinear sample of `lwir` at H*p; samples outside the source are black.
Frame Register(const Frame& lwir, const Homography& homography,
               int target_width, int target_height);

// Pixel-level alpha blend: F = round(a*rgb + (1-a)*lwir), rounding half away
// from zero. Inputs must share dimensions (register first).
Frame Blend(const Frame& rgb, const Frame& lwir, FusionLevel level);

// Single-channel form of Blend, exposed for property tests.
uint8_t BlendChannel(uint8_t rgb, uint8_t lwir, FusionLevel level);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_FUSION_HPP_
