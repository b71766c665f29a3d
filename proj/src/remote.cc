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

#include "adaptfuse/remote.hpp"

#include <chrono>

#include "adaptfuse/error.hpp"
#include "adaptfuse/protocol.hpp"
#include "httplib.h"

namespace adaptfuse {

namespace {

// httplib reports an elapsed read timeout as a generic read error; anything
// that failed after (close to) the full budget is classified as a timeout.
[[noreturn]] void FailTransport(httplib::Error error, double elapsed_ms,
                                int timeout_ms, const std::string& endpoint) {
  if (error == httplib::Error::ConnectionTimeout ||
      (error == httplib::Error::Read && elapsed_ms >= 0.9 * timeout_ms)) {
    Fail(ErrorCode::kTimeout, endpoint + ": request timed out after " +
                                  std::to_string(timeout_ms) + " ms");
  }
  Fail(ErrorCode::kTransport, endpoint + ": " + httplib::to_string(error));
}

}  // namespace

RemoteDetector::RemoteDetector(const std::string& endpoint, int timeout_ms)
    : endpoint_(endpoint), timeout_ms_(timeout_ms) {
  if (timeout_ms <= 0) {
    Fail(ErrorCode::kInvalidArgument, "timeout must be positive");
  }
  if (endpoint.rfind("http://", 0) != 0) {
    Fail(ErrorCode::kInvalidArgument,
         "endpoint must look like http://host:port, got '" + endpoint + "'");
  }
  client_ = std::make_unique<httplib::Client>(endpoint);
  if (!client_->is_valid()) {
    Fail(ErrorCode::kInvalidArgument, "invalid endpoint '" + endpoint + "'");
  }
  const auto t = std::chrono::milliseconds(timeout_ms);
  client_->set_connection_timeout(t);
  client_->set_read_timeout(t);
  client_->set_write_timeout(t);
  client_->set_keep_alive(true);
}

RemoteDetector::~RemoteDetector() = default;

std::pair<int, std::string> RemoteDetector::PostDetect(const std::string& body) {
  const auto start = std::chrono::steady_clock::now();
  auto res = client_->Post(protocol::kDetectPath, body, "application/json");
  if (!res) {
    const double elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    FailTransport(res.error(), elapsed, timeout_ms_, endpoint_);
  }
  return {res->status, res->body};
}

std::pair<int, std::string> RemoteDetector::Get(const std::string& path) {
  const auto start = std::chrono::steady_clock::now();
  auto res = client_->Get(path);
  if (!res) {
    const double elapsed = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    FailTransport(res.error(), elapsed, timeout_ms_, endpoint_);
  }
  return {res->status, res->body};
}

DetectionResult RemoteDetector::Detect(const Frame& frame,
                                       const std::string& model_id,
                                       const FrameContext& context) {
  const auto request =
      protocol::MakeDetectRequest(frame, context.frame_id, model_id, context.lux);
  const auto [status, body] = PostDetect(protocol::SerializeDetectRequest(request));
  DetectionResult result = protocol::ParseDetectResponse(status, body);
  if (result.frame_id != context.frame_id || result.model_id != model_id) {
    Fail(ErrorCode::kMalformedResponse,
         "response echoes (" + result.frame_id + ", " + result.model_id +
             ") for request (" + context.frame_id + ", " + model_id + ")");
  }
  result.timestamp_ms = context.timestamp_ms;
  return result;
}

std::vector<std::string> RemoteDetector::ListModels() {
  const auto [status, body] = Get(protocol::kModelsPath);
  if (status != 200) {
    Fail(ErrorCode::kTransport, "model list returned HTTP " + std::to_string(status));
  }
  return protocol::ParseModelList(body);
}

bool RemoteDetector::Health() {
  const auto [status, body] = Get(protocol::kHealthPath);
  return status == 200 && protocol::IsHealthyBody(body);
}

}  // namespace adaptfuse
