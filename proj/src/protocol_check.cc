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

#include <algorithm>
#include <functional>

#include "adaptfuse/error.hpp"
#include "adaptfuse/fixtures.hpp"
#include "adaptfuse/fusion.hpp"
#include "adaptfuse/protocol.hpp"
#include "adaptfuse/remote.hpp"
#include "json.hpp"

namespace adaptfuse {

size_t ProtocolCheckReport::violations() const {
  return static_cast<size_t>(std::count_if(
      checks.begin(), checks.end(), [](const ProtocolCheck& c) { return !c.passed; }));
}

ProtocolCheckReport RunProtocolCheck(const std::string& endpoint, int timeout_ms,
                                     const std::string& probe_model) {
  using nlohmann::json;
  ProtocolCheckReport report;
  RemoteDetector client(endpoint, timeout_ms);

  auto run = [&report](const std::string& name, const std::function<std::string()>& body) {
    ProtocolCheck check{name, false, ""};
    try {
      check.detail = body();
      check.passed = true;
    } catch (const std::exception& e) {
      check.detail = e.what();
    }
    report.checks.push_back(std::move(check));
  };

  run("health", [&] {
    const auto [status, body] = client.Get(protocol::kHealthPath);
    if (status != 200) Fail(ErrorCode::kMalformedResponse, "HTTP " + std::to_string(status));
    if (!protocol::IsHealthyBody(body)) {
      Fail(ErrorCode::kMalformedResponse, "body is not {\"status\": \"ok\"}: " + body);
    }
    return std::string("ok");
  });

  std::string model = probe_model;
  run("models", [&] {
    const auto ids = client.ListModels();
    if (ids.empty()) Fail(ErrorCode::kMalformedResponse, "model list is empty");
    if (model.empty()) {
      model = std::find(ids.begin(), ids.end(), "stub") != ids.end() ? "stub" : ids.front();
    } else if (std::find(ids.begin(), ids.end(), model) == ids.end()) {
      Fail(ErrorCode::kMalformedResponse, "probe model '" + model + "' is not listed");
    }
    return std::to_string(ids.size()) + " models";
  });
  if (model.empty()) model = "stub";

  SceneSpec scene;
  auto [rgb, lwir] = GenerateSyntheticPair(scene);
  const Frame fused = Blend(rgb, lwir, FusionLevel(50));
  const auto request = protocol::MakeDetectRequest(fused, "probe-0001", model, 500.0);
  const std::string request_body = protocol::SerializeDetectRequest(request);

  std::optional<DetectionResult> first;
  run("detect_schema", [&] {
    const auto [status, body] = client.PostDetect(request_body);
    DetectionResult r = protocol::ParseDetectResponse(status, body);
    if (r.frame_id != request.frame_id) {
      Fail(ErrorCode::kMalformedResponse, "frame_id not echoed");
    }
    if (r.model_id != request.model_id) {
      Fail(ErrorCode::kMalformedResponse, "model_id not echoed");
    }
    first = r;
    return std::to_string(r.detections.size()) + " detections";
  });

  run("detect_deterministic", [&] {
    if (!first) Fail(ErrorCode::kMalformedResponse, "no baseline response");
    const auto [status, body] = client.PostDetect(request_body);
    DetectionResult again = protocol::ParseDetectResponse(status, body);
    if (again.detections != first->detections) {
      Fail(ErrorCode::kMalformedResponse, "detections differ for identical requests");
    }
    return std::string("stable");
  });

  run("unknown_model", [&] {
    auto bad = request;
    bad.model_id = "no-such-model-7f3a";
    const auto [status, body] = client.PostDetect(protocol::SerializeDetectRequest(bad));
    if (status != 404) Fail(ErrorCode::kMalformedResponse, "expected 404, got " + std::to_string(status));
    const json j = json::parse(body);
    if (j.value("error", "") != "unknown_model" || j.value("model_id", "") != bad.model_id) {
      Fail(ErrorCode::kMalformedResponse, "404 body does not match contract: " + body);
    }
    return std::string("404 unknown_model");
  });

  run("bad_request", [&] {
    auto bad = request;
    bad.image_b64 = "not*base64";
    const auto [status, body] = client.PostDetect(protocol::SerializeDetectRequest(bad));
    if (status != 400) Fail(ErrorCode::kMalformedResponse, "expected 400, got " + std::to_string(status));
    const json j = json::parse(body);
    if (j.value("error", "") != "bad_request" || !j.contains("detail")) {
      Fail(ErrorCode::kMalformedResponse, "400 body does not match contract: " + body);
    }
    return std::string("400 bad_request");
  });

  return report;
}

}  // namespace adaptfuse
