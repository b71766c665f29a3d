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

#ifndef ADAPTFUSE_FRAME_HPP_
#define ADAPTFUSE_FRAME_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace adaptfuse {

enum class Modality { kRgb, kLwir, kFused };

const char* ModalityName(Modality modality);

using Rgb8 = std::array<uint8_t, 3>;

// An 8-bit, 3-channel, row-major raster. The buffer length is always exactly
// width * height * 3; the constructor rejects anything else.
class Frame {
 public:
  Frame(int width, int height, Modality modality, std::vector<uint8_t> pixels,
        int64_t timestamp_ms = 0);
  // Solid-color frame.
  Frame(int width, int height, Modality modality, Rgb8 fill,
        int64_t timestamp_ms = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  Modality modality() const { return modality_; }
  int64_t timestamp_ms() const { return timestamp_ms_; }
  std::span<const uint8_t> pixels() const { return pixels_; }

  uint8_t at(int x, int y, int channel) const {
    return pixels_[(static_cast<size_t>(y) * width_ + x) * 3 + channel];
  }
  Rgb8 pixel(int x, int y) const {
    const size_t i = (static_cast<size_t>(y) * width_ + x) * 3;
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }

  std::string ShapeString() const;

  Frame WithModality(Modality modality) const;
  Frame WithTimestamp(int64_t timestamp_ms) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_;
  int height_;
  Modality modality_;
  std::vector<uint8_t> pixels_;
  int64_t timestamp_ms_;
};

}  // namespace adaptfuse

#endif  // ADAPTFUSE_FRAME_HPP_
