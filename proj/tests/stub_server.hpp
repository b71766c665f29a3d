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

#ifndef ADAPTFUSE_TESTS_STUB_SERVER_HPP_
#define ADAPTFUSE_TESTS_STUB_SERVER_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include "adaptfuse/error.hpp"
#include "adaptfuse/protocol.hpp"
#include "httplib.h"

namespace adaptfuse::testing {

// In-process detector service speaking the wire protocol. Responses are a
// pure function of the request unless a fault mode is selected.
class StubServer {
 public:
  enum class Mode { kNormal, kMalformed, kSlow, kWrongEcho, kNoHealth };

  explicit StubServer(Mode mode = Mode::kNormal,
                      std::vector<std::string> models = {"dim_f90", "full_f80",
                                                         "no_f40", "stub"})
      : mode_(mode), models_(std::move(models)) {
    server_.Get(protocol::kHealthPath, [this](const httplib::Request&, httplib::Response& res) {
      if (mode_ == Mode::kNoHealth) {
        res.status = 503;
        res.set_content(R"({"status":"down"})", "application/json");
        return;
      }
      res.set_content(R"({"status":"ok"})", "application/json");
    });
    server_.Get(protocol::kModelsPath, [this](const httplib::Request&, httplib::Response& res) {
      std::string body = "[";
      for (size_t i = 0; i < models_.size(); ++i) {
        body += (i ? ",\"" : "\"") + models_[i] + "\"";
      }
      res.set_content(body + "]", "application/json");
    });
    server_.Post(protocol::kDetectPath,
                 [this](const httplib::Request& req, httplib::Response& res) {
                   Handle(req, res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests() const { return requests_.load(); }

 private:
  void Handle(const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    if (mode_ == Mode::kSlow) std::this_thread::sleep_for(std::chrono::milliseconds(600));
    if (mode_ == Mode::kMalformed) {
      res.set_content(R"({"frame_id":"x","detections":"none"})", "application/json");
      return;
    }
    protocol::DetectRequest request;
    Frame image(1, 1, Modality::kFused, Rgb8{0, 0, 0});
    try {
      request = protocol::ParseDetectRequest(req.body);
      image = protocol::DecodeRequestImage(request);
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(protocol::BadRequestBody(e.what()), "application/json");
      return;
    }
    if (std::find(models_.begin(), models_.end(), request.model_id) == models_.end()) {
      res.status = 404;
      res.set_content(protocol::UnknownModelBody(request.model_id), "application/json");
      return;
    }
    DetectionResult r;
    r.frame_id = mode_ == Mode::kWrongEcho ? request.frame_id + "-other" : request.frame_id;
    r.model_id = request.model_id;
    r.inference_latency_ms = 1.5;
    // Confidence is the mean red channel so distinct images give distinct answers.
    double sum = 0.0;
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < image.width(); ++x) sum += image.at(x, y, 0);
    }
    const double mean = sum / (255.0 * image.width() * image.height());
    r.detections.push_back({0, mean, {0.5, 0.5, 0.25, 0.25}});
    res.set_content(protocol::SerializeDetectResponse(r), "application/json");
  }

  Mode mode_;
  std::vector<std::string> models_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::atomic<int> requests_{0};
};

}  // namespace adaptfuse::testing

#endif  // ADAPTFUSE_TESTS_STUB_SERVER_HPP_
