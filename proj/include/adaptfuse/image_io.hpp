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

#ifndef ADAPTFUSE_IMAGE_IO_HPP_
#define ADAPTFUSE_IMAGE_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "adaptfuse/frame.hpp"

namespace adaptfuse {

// PNG codec for 8-bit RGB frames. Encoding is deterministic: no timestamp or
// text chunks are written, so equal frames always produce equal bytes.
std::vector<uint8_t> EncodePng(const Frame& frame);
Frame DecodePng(std::span<const uint8_t> bytes, Modality modality,
                int64_t timestamp_ms = 0);

Frame ReadPng(const std::filesystem::path& path, Modality modality,
              int64_t timestamp_ms = 0);
void WritePng(const Frame& frame, const std::filesystem::path& path);

std::string Base64Encode(std::span<const uint8_t> bytes);
std::vector<uint8_t> Base64Decode(std::string_view text);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_IMAGE_IO_HPP_
