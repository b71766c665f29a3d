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

#ifndef ADAPTFUSE_PROTOCOL_HPP_
#define ADAPTFUSE_PROTOCOL_HPP_

#include <string>
#include <vector>

#include "adaptfuse/detection.hpp"
#include "adaptfuse/frame.hpp"

// JSON wire format between the edge pipeline and the detector service.
//
//   POST /v1/detect
//     {"frame_id", "model_id", "lux", "width", "height", "image_b64"}
//   200 {"frame_id", "model_id", "inference_ms",
//        "detections": [{"class_id", "confidence", "bbox": [cx, cy, w, h]}]}
//   404 {"error": "unknown_model", "model_id"}
//   400 {"error": "bad_request", "detail"}
//   GET /v1/models -> ["model_id", ...]
//   GET /v1/health -> {"status": "ok"}
namespace adaptfuse::protocol {

inline constexpr const char* kDetectPath = "/v1/detect";
inline constexpr const char* kModelsPath = "/v1/models";
inline constexpr const char* kHealthPath = "/v1/health";

struct DetectRequest {
  std::string frame_id;
  std::string model_id;
  double lux = 0.0;
  int width = 0;
  int height = 0;
  std::string image_b64;  // base64 of the PNG-encoded fused frame

  friend bool operator==(const DetectRequest&, const DetectRequest&) = default;
};

DetectRequest MakeDetectRequest(const Frame& fused, const std::string& frame_id,
                                const std::string& model_id, double lux);
std::string SerializeDetectRequest(const DetectRequest& request);
// Throws kParse on schema violations.
DetectRequest ParseDetectRequest(const std::string& body);
// Decodes image_b64 and checks it against the declared width/height.
Frame DecodeRequestImage(const DetectRequest& request);

std::string SerializeDetectResponse(const DetectionResult& result);

// Maps an HTTP status + body onto a DetectionResult or a typed error:
//   kUnknownModel for 404 unknown_model, kMalformedResponse for any schema or
//   invariant violation, kInvalidArgument for 400, kTransport otherwise.
DetectionResult ParseDetectResponse(int status, const std::string& body);

std::string UnknownModelBody(const std::string& model_id);
std::string BadRequestBody(const std::string& detail);

std::vector<std::string> ParseModelList(const std::string& body);
bool IsHealthyBody(const std::string& body);

}  // namespace adaptfuse::protocol

#endif  // ADAPTFUSE_PROTOCOL_HPP_
