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

#include "adaptfuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"

namespace adaptfuse {

FusionLevel::FusionLevel(int rgb_percent) : rgb_percent_(rgb_percent) {
  if (rgb_percent < 0 || rgb_percent > 100 || rgb_percent % 10 != 0) {
    Fail(ErrorCode::kInvalidArgument,
         "fusion level must be a multiple of 10 in [0, 100], got " +
             std::to_string(rgb_percent));
  }
}

std::string FusionLevel::Label() const {
  return std::to_string(rgb_percent_) + "/" + std::to_string(lwir_percent());
}

std::vector<FusionLevel> AllFusionLevels() {
  std::vector<FusionLevel> levels;
  for (int p = 100; p >= 0; p -= 10) levels.emplace_back(p);
  return levels;
}

std::vector<FusionLevel> ParseFusionLevels(const std::string& text) {
  const std::string trimmed = Trim(text);
  if (trimmed == "all") return AllFusionLevels();
  std::vector<FusionLevel> levels;
  for (const auto& field : SplitFields(trimmed, ',')) {
    const int p = static_cast<int>(ParseInteger(field, "fusion level"));
    FusionLevel level(p);
    for (const auto& seen : levels) {
      if (seen == level) {
        Fail(ErrorCode::kInvalidArgument,
             "duplicate fusion level " + std::to_string(p));
      }
    }
    levels.push_back(level);
  }
  if (levels.empty()) {
    Fail(ErrorCode::kInvalidArgument, "no fusion levels given");
  }
  return levels;
}

Homography::Homography(const std::array<double, 9>& coefficients)
    : m_(coefficients) {
  for (double c : m_) {
    if (!std::isfinite(c)) {
      Fail(ErrorCode::kRegistration, "homography has non-finite coefficient");
    }
  }
  if (m_[8] == 0.0) {
    Fail(ErrorCode::kRegistration,
         "homography bottom-right element is zero; cannot normalize");
  }
  if (m_[8] != 1.0) {
    const double s = m_[8];
    for (double& c : m_) c /= s;
  }
  if (std::abs(Determinant()) <= 1e-12) {
    Fail(ErrorCode::kRegistration, "homography is not invertible (det = " +
                                       FormatDouble(Determinant()) + ")");
  }
}

Homography Homography::Identity() {
  return Homography({1, 0, 0, 0, 1, 0, 0, 0, 1});
}

Homography Homography::Translation(double tx, double ty) {
  return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

Homography Homography::Parse(const std::string& text) {
  std::string normalized = text;
  for (char& c : normalized) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream in(normalized);
  std::array<double, 9> values{};
  std::string token;
  size_t count = 0;
  while (in >> token) {
    if (count == 9) {
      Fail(ErrorCode::kParse, "homography needs exactly nine numbers");
    }
    values[count++] = ParseDouble(token, "homography");
  }
  if (count != 9) {
    Fail(ErrorCode::kParse, "homography needs exactly nine numbers, got " +
                                std::to_string(count));
  }
  return Homography(values);
}

double Homography::Determinant() const {
  const auto& a = m_;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) -
         a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

bool Homography::IsIdentity() const {
  return m_ == std::array<double, 9>{1, 0, 0, 0, 1, 0, 0, 0, 1};
}

bool Homography::Map(double x, double y, double* out_x, double* out_y) const {
  const double w = m_[6] * x + m_[7] * y + m_[8];
  if (!(w > 1e-12)) return false;
  *out_x = (m_[0] * x + m_[1] * y + m_[2]) / w;
  *out_y = (m_[3] * x + m_[4] * y + m_[5]) / w;
  return true;
}

std::string Homography::ToString() const {
  std::string s;
  for (size_t i = 0; i < m_.size(); ++i) {
    if (i) s += ' ';
    s += FormatDouble(m_[i]);
  }
  return s;
}

Frame Register(const Frame& lwir, const Homography& homography,
               int target_width, int target_height) {
  if (lwir.modality() != Modality::kLwir) {
    Fail(ErrorCode::kRegistration, std::string("register expects an LWIR frame, got ") +
                                       ModalityName(lwir.modality()));
  }
  if (target_width <= 0 || target_height <= 0) {
    Fail(ErrorCode::kRegistration, "target dimensions must be positive");
  }
  if (homography.IsIdentity() && target_width == lwir.width() &&
      target_height == lwir.height()) {
    return lwir;
  }

  const int src_w = lwir.width();
  const int src_h = lwir.height();
  std::vector<uint8_t> out(static_cast<size_t>(target_width) * target_height * 3, 0);
  for (int y = 0; y < target_height; ++y) {
    for (int x = 0; x < target_width; ++x) {
      double sx = 0, sy = 0;
      if (!homography.Map(x, y, &sx, &sy)) continue;
      if (sx < 0.0 || sy < 0.0 || sx > src_w - 1 || sy > src_h - 1) continue;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, src_w - 1);
      const int y1 = std::min(y0 + 1, src_h - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      uint8_t* dst = &out[(static_cast<size_t>(y) * target_width + x) * 3];
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - fx) * lwir.at(x0, y0, c) + fx * lwir.at(x1, y0, c);
        const double bottom = (1.0 - fx) * lwir.at(x0, y1, c) + fx * lwir.at(x1, y1, c);
        const double v = std::round((1.0 - fy) * top + fy * bottom);
        dst[c] = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
      }
    }
  }
  return Frame(target_width, target_height, Modality::kLwir, std::move(out),
               lwir.timestamp_ms());
}

uint8_t BlendChannel(uint8_t rgb, uint8_t lwir, FusionLevel level) {
  // Exact in integers: (p*rgb + (100-p)*lwir) / 100, half rounded up, which is
  // half-away-from-zero for non-negative values. Never exceeds 255.
  const int p = level.rgb_percent();
  const int numerator = p * rgb + (100 - p) * lwir;
  return static_cast<uint8_t>((numerator + 50) / 100);
}

Frame Blend(const Frame& rgb, const Frame& lwir, FusionLevel level) {
  if (rgb.modality() != Modality::kRgb || lwir.modality() != Modality::kLwir) {
    Fail(ErrorCode::kFusion, std::string("blend expects (RGB, LWIR), got (") +
                                 ModalityName(rgb.modality()) + ", " +
                                 ModalityName(lwir.modality()) + ")");
  }
  if (rgb.width() != lwir.width() || rgb.height() != lwir.height()) {
    Fail(ErrorCode::kFusion, "cannot blend RGB " + rgb.ShapeString() +
                                 " with LWIR " + lwir.ShapeString());
  }
  const auto a = rgb.pixels();
  const auto b = lwir.pixels();
  std::vector<uint8_t> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    out[i] = BlendChannel(a[i], b[i], level);
  }
  return Frame(rgb.width(), rgb.height(), Modality::kFused, std::move(out),
               rgb.timestamp_ms());
}

}  // namespace adaptfuse
