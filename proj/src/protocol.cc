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

#include "adaptfuse/protocol.hpp"

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"
#include "adaptfuse/image_io.hpp"
#include "json.hpp"

namespace adaptfuse::protocol {

using nlohmann::json;

namespace {

json ParseJson(const std::string& body, ErrorCode code, const char* what) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    Fail(code, std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

DetectRequest MakeDetectRequest(const Frame& fused, const std::string& frame_id,
                                const std::string& model_id, double lux) {
  DetectRequest r;
  r.frame_id = frame_id;
  r.model_id = model_id;
  r.lux = lux;
  r.width = fused.width();
  r.height = fused.height();
  r.image_b64 = Base64Encode(EncodePng(fused));
  return r;
}

std::string SerializeDetectRequest(const DetectRequest& request) {
  json j;
  j["frame_id"] = request.frame_id;
  j["model_id"] = request.model_id;
  j["lux"] = request.lux;
  j["width"] = request.width;
  j["height"] = request.height;
  j["image_b64"] = request.image_b64;
  return j.dump();
}

DetectRequest ParseDetectRequest(const std::string& body) {
  const json j = ParseJson(body, ErrorCode::kParse, "detect request");
  try {
    DetectRequest r;
    r.frame_id = j.at("frame_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    if (!j.at("lux").is_number()) Fail(ErrorCode::kParse, "lux must be a number");
    r.lux = j.at("lux").get<double>();
    if (!j.at("width").is_number_integer() || !j.at("height").is_number_integer()) {
      Fail(ErrorCode::kParse, "width and height must be integers");
    }
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    r.image_b64 = j.at("image_b64").get<std::string>();
    if (r.width <= 0 || r.height <= 0) {
      Fail(ErrorCode::kParse, "width and height must be positive");
    }
    if (r.lux < 0.0) Fail(ErrorCode::kParse, "lux must be non-negative");
    return r;
  } catch (const json::exception& e) {
    Fail(ErrorCode::kParse, std::string("detect request: ") + e.what());
  }
}

Frame DecodeRequestImage(const DetectRequest& request) {
  Frame frame = DecodePng(Base64Decode(request.image_b64), Modality::kFused);
  if (frame.width() != request.width || frame.height() != request.height) {
    Fail(ErrorCode::kParse, "image is " + frame.ShapeString() +
                                " but request declares " +
                                std::to_string(request.width) + "x" +
                                std::to_string(request.height));
  }
  return frame;
}

std::string SerializeDetectResponse(const DetectionResult& result) {
  json dets = json::array();
  for (const auto& d : result.detections) {
    dets.push_back({{"class_id", d.class_id},
                    {"confidence", d.confidence},
                    {"bbox", {d.bbox.cx, d.bbox.cy, d.bbox.w, d.bbox.h}}});
  }
  json j;
  j["frame_id"] = result.frame_id;
  j["model_id"] = result.model_id;
  j["inference_ms"] = result.inference_latency_ms;
  j["detections"] = std::move(dets);
  return j.dump();
}

DetectionResult ParseDetectResponse(int status, const std::string& body) {
  if (status == 404) {
    const json j = ParseJson(body, ErrorCode::kMalformedResponse, "404 body");
    if (j.is_object() && j.value("error", "") == "unknown_model") {
      Fail(ErrorCode::kUnknownModel,
           "server does not know model '" + j.value("model_id", "") + "'");
    }
    Fail(ErrorCode::kMalformedResponse, "404 without unknown_model body");
  }
  if (status == 400) {
    std::string detail = body;
    try {
      const json j = json::parse(body);
      if (j.is_object()) detail = j.value("detail", body);
    } catch (const json::exception&) {
    }
    Fail(ErrorCode::kInvalidArgument, "server rejected request: " + detail);
  }
  if (status != 200) {
    Fail(ErrorCode::kTransport, "unexpected HTTP status " + std::to_string(status));
  }

  const json j = ParseJson(body, ErrorCode::kMalformedResponse, "response");
  DetectionResult r;
  try {
    r.frame_id = j.at("frame_id").get<std::string>();
    r.model_id = j.at("model_id").get<std::string>();
    if (!j.at("inference_ms").is_number()) {
      Fail(ErrorCode::kMalformedResponse, "inference_ms must be a number");
    }
    r.inference_latency_ms = j.at("inference_ms").get<double>();
    if (r.inference_latency_ms < 0.0) {
      Fail(ErrorCode::kMalformedResponse, "negative inference_ms");
    }
    const json& dets = j.at("detections");
    if (!dets.is_array()) {
      Fail(ErrorCode::kMalformedResponse, "detections must be an array");
    }
    size_t index = 0;
    for (const auto& item : dets) {
      Detection d;
      if (!item.at("class_id").is_number_integer()) {
        Fail(ErrorCode::kMalformedResponse, "class_id must be an integer");
      }
      d.class_id = item.at("class_id").get<int>();
      if (!item.at("confidence").is_number()) {
        Fail(ErrorCode::kMalformedResponse, "confidence must be a number");
      }
      d.confidence = item.at("confidence").get<double>();
      const json& box = item.at("bbox");
      if (!box.is_array() || box.size() != 4) {
        Fail(ErrorCode::kMalformedResponse, "bbox must be [cx, cy, w, h]");
      }
      for (const auto& v : box) {
        if (!v.is_number()) Fail(ErrorCode::kMalformedResponse, "bbox values must be numbers");
      }
      d.bbox = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                box[3].get<double>()};
      ValidateDetection(d, ErrorCode::kMalformedResponse,
                        "detections[" + std::to_string(index++) + "]");
      r.detections.push_back(d);
    }
  } catch (const json::exception& e) {
    Fail(ErrorCode::kMalformedResponse, std::string("response: ") + e.what());
  }
  return r;
}

std::string UnknownModelBody(const std::string& model_id) {
  return json{{"error", "unknown_model"}, {"model_id", model_id}}.dump();
}

std::string BadRequestBody(const std::string& detail) {
  return json{{"error", "bad_request"}, {"detail", detail}}.dump();
}

std::vector<std::string> ParseModelList(const std::string& body) {
  const json j = ParseJson(body, ErrorCode::kMalformedResponse, "model list");
  if (!j.is_array()) Fail(ErrorCode::kMalformedResponse, "model list must be an array");
  std::vector<std::string> ids;
  for (const auto& v : j) {
    if (!v.is_string()) Fail(ErrorCode::kMalformedResponse, "model ids must be strings");
    ids.push_back(v.get<std::string>());
  }
  return ids;
}

bool IsHealthyBody(const std::string& body) {
  try {
    const json j = json::parse(body);
    return j.is_object() && j.value("status", "") == "ok";
  } catch (const json::exception&) {
    return false;
  }
}

}  // namespace adaptfuse::protocol
