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

#ifndef ADAPTFUSE_REMOTE_HPP_
#define ADAPTFUSE_REMOTE_HPP_

#include <memory>
#include <string>
#include <vector>

#include "adaptfuse/detection.hpp"

namespace httplib {
class Client;
}

namespace adaptfuse {

// HTTP client for the detector service. One request in flight at a time.
class RemoteDetector : public DetectorBackend {
 public:
  // `endpoint` is scheme://host:port, e.g. http://127.0.0.1:8000.
  RemoteDetector(const std::string& endpoint, int timeout_ms = 2000);
  ~RemoteDetector() override;

  // Errors: kTimeout, kTransport, kMalformedResponse, kUnknownModel,
  // kInvalidArgument (server-side 400).
  DetectionResult Detect(const Frame& frame, const std::string& model_id,
                         const FrameContext& context) override;
  std::string Name() const override { return "remote"; }

  // Raw POST of an already-serialized body; returns (status, body).
  std::pair<int, std::string> PostDetect(const std::string& body);
  std::pair<int, std::string> Get(const std::string& path);

  std::vector<std::string> ListModels();
  bool Health();

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  int timeout_ms_;
  std::unique_ptr<httplib::Client> client_;
};

// Wire-protocol conformance probe against a live detector service.
struct ProtocolCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ProtocolCheckReport {
  std::vector<ProtocolCheck> checks;
  size_t violations() const;
};

// `probe_model` selects the model exercised by the detect checks; empty picks
// "stub" when advertised, else the first listed model.
ProtocolCheckReport RunProtocolCheck(const std::string& endpoint,
                                     int timeout_ms = 2000,
                                     const std::string& probe_model = "");

}  // namespace adaptfuse

#endif  // ADAPTFUSE_REMOTE_HPP_
