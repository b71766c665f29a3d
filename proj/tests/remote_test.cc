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

#include <string>

#include "adaptfuse/error.hpp"
#include "adaptfuse/fixtures.hpp"
#include "gtest/gtest.h"
#include "stub_server.hpp"

namespace adaptfuse {
namespace {

using testing::StubServer;

FrameContext Context(const std::string& frame_id) {
  FrameContext c;
  c.frame_id = frame_id;
  c.timestamp_ms = 300;
  c.lux = 500.0;
  return c;
}

ErrorCode DetectError(RemoteDetector& client, const std::string& model) {
  const Frame f(4, 4, Modality::kFused, Rgb8{128, 0, 0});
  try {
    client.Detect(f, model, Context("r/0"));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "detect succeeded";
  return ErrorCode::kInternal;
}

TEST(RemoteDetectorTest, RejectsBadEndpoints) {
  EXPECT_THROW(RemoteDetector("127.0.0.1:8000"), Error);
  EXPECT_THROW(RemoteDetector("http://127.0.0.1:8000", 0), Error);
}

TEST(RemoteDetectorTest, DetectRoundTrip) {
  StubServer server;
  RemoteDetector client(server.endpoint(), 2000);
  const Frame f(4, 4, Modality::kFused, Rgb8{255, 0, 0});
  const auto r = client.Detect(f, "dim_f90", Context("r/7"));
  EXPECT_EQ(r.frame_id, "r/7");
  EXPECT_EQ(r.model_id, "dim_f90");
  EXPECT_EQ(r.timestamp_ms, 300);
  ASSERT_EQ(r.detections.size(), 1u);
  EXPECT_DOUBLE_EQ(r.detections[0].confidence, 1.0);
  EXPECT_DOUBLE_EQ(r.inference_latency_ms, 1.5);
  EXPECT_TRUE(client.Health());
  EXPECT_EQ(client.ListModels().size(), 4u);
}

TEST(RemoteDetectorTest, ErrorClassification) {
  StubServer server;
  RemoteDetector client(server.endpoint(), 2000);
  EXPECT_EQ(DetectError(client, "dim_f95"), ErrorCode::kUnknownModel);

  StubServer malformed(StubServer::Mode::kMalformed);
  RemoteDetector bad(malformed.endpoint(), 2000);
  EXPECT_EQ(DetectError(bad, "dim_f90"), ErrorCode::kMalformedResponse);

  StubServer echo(StubServer::Mode::kWrongEcho);
  RemoteDetector wrong(echo.endpoint(), 2000);
  EXPECT_EQ(DetectError(wrong, "dim_f90"), ErrorCode::kMalformedResponse);
}

TEST(RemoteDetectorTest, SlowServerTimesOut) {
  StubServer server(StubServer::Mode::kSlow);
  RemoteDetector client(server.endpoint(), 200);
  EXPECT_EQ(DetectError(client, "dim_f90"), ErrorCode::kTimeout);
}

TEST(RemoteDetectorTest, RefusedConnectionIsTransport) {
  int port = 0;
  {
    StubServer server;
    port = std::stoi(server.endpoint().substr(server.endpoint().rfind(':') + 1));
  }
  RemoteDetector client("http://127.0.0.1:" + std::to_string(port), 500);
  EXPECT_EQ(DetectError(client, "dim_f90"), ErrorCode::kTransport);
}

TEST(ProtocolCheckTest, ConformingServerHasNoViolations) {
  StubServer server;
  const auto report = RunProtocolCheck(server.endpoint(), 2000);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  EXPECT_EQ(report.checks.size(), 6u);
  EXPECT_EQ(report.violations(), 0u);
}

TEST(ProtocolCheckTest, FaultsAreReportedAsViolations) {
  StubServer malformed(StubServer::Mode::kMalformed);
  const auto report = RunProtocolCheck(malformed.endpoint(), 2000);
  EXPECT_GE(report.violations(), 3u);

  StubServer sick(StubServer::Mode::kNoHealth);
  const auto sick_report = RunProtocolCheck(sick.endpoint(), 2000);
  EXPECT_EQ(sick_report.violations(), 1u);
  EXPECT_EQ(sick_report.checks[0].name, "health");
  EXPECT_FALSE(sick_report.checks[0].passed);

  StubServer server;
  EXPECT_EQ(RunProtocolCheck(server.endpoint(), 2000, "missing_model").violations(), 3u);
}

}  // namespace
}  // namespace adaptfuse
