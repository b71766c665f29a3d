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

#include "adaptfuse/frame.hpp"

#include "adaptfuse/error.hpp"

namespace adaptfuse {

const char* ModalityName(Modality modality) {
  switch (modality) {
    case Modality::kRgb: return "RGB";
    case Modality::kLwir: return "LWIR";
    case Modality::kFused: return "Fused";
  }
  return "?";
}

Frame::Frame(int width, int height, Modality modality,
             std::vector<uint8_t> pixels, int64_t timestamp_ms)
    : width_(width),
      height_(height),
      modality_(modality),
      pixels_(std::move(pixels)),
      timestamp_ms_(timestamp_ms) {
  if (width <= 0 || height <= 0) {
    Fail(ErrorCode::kInvalidArgument,
         "frame dimensions must be positive, got " + ShapeString());
  }
  const size_t expected = static_cast<size_t>(width) * height * 3;
  if (pixels_.size() != expected) {
    Fail(ErrorCode::kInvalidArgument,
         "frame buffer holds " + std::to_string(pixels_.size()) +
             " bytes, expected " + std::to_string(expected) + " for " +
             ShapeString());
  }
}

Frame::Frame(int width, int height, Modality modality, Rgb8 fill,
             int64_t timestamp_ms)
    : Frame(width, height, modality,
            std::vector<uint8_t>(
                width > 0 && height > 0 ? static_cast<size_t>(width) * height * 3
                                        : 0),
            timestamp_ms) {
  for (size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill[0];
    pixels_[i + 1] = fill[1];
    pixels_[i + 2] = fill[2];
  }
}

std::string Frame::ShapeString() const {
  return std::to_string(width_) + "x" + std::to_string(height_) + "x3";
}

Frame Frame::WithModality(Modality modality) const {
  Frame copy = *this;
  copy.modality_ = modality;
  return copy;
}

Frame Frame::WithTimestamp(int64_t timestamp_ms) const {
  Frame copy = *this;
  copy.timestamp_ms_ = timestamp_ms;
  return copy;
}

}  // namespace adaptfuse
