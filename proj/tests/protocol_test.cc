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

#include <random>
#include <string>

#include "adaptfuse/csv.hpp"
#include "adaptfuse/error.hpp"
#include "adaptfuse/protocol.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace adaptfuse {
namespace {

using testing::GoldenPath;

std::string Golden(const std::string& name) {
  std::string text = ReadTextFile(GoldenPath(name));
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

ErrorCode ResponseError(int status, const std::string& body) {
  try {
    protocol::ParseDetectResponse(status, body);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "response accepted: " << body;
  return ErrorCode::kInternal;
}

TEST(ProtocolGoldenTest, RequestParsesAndReserializesByteForByte) {
  const std::string body = Golden("detect_request.json");
  const auto req = protocol::ParseDetectRequest(body);
  EXPECT_EQ(req.frame_id, "rec01/000042");
  EXPECT_EQ(req.model_id, "dim_f90");
  EXPECT_EQ(req.lux, 500.0);
  EXPECT_EQ(req.width, 2);
  EXPECT_EQ(req.height, 2);
  EXPECT_EQ(protocol::SerializeDetectRequest(req), body);

  const Frame image = protocol::DecodeRequestImage(req);
  EXPECT_EQ(image.pixel(0, 0), (Rgb8{10, 20, 30}));
  EXPECT_EQ(image.pixel(1, 0), (Rgb8{40, 50, 60}));
  EXPECT_EQ(image.pixel(0, 1), (Rgb8{70, 80, 90}));
  EXPECT_EQ(image.pixel(1, 1), (Rgb8{200, 210, 220}));
}

TEST(ProtocolGoldenTest, ResponseMatchesTheExpectedResult) {
  const std::string body = Golden("detect_response.json");
  const auto r = protocol::ParseDetectResponse(200, body);
  DetectionResult expected;
  expected.frame_id = "rec01/000042";
  expected.model_id = "dim_f90";
  expected.inference_latency_ms = 12.5;
  expected.detections = {{0, 0.9203, {0.5, 0.5, 0.2, 0.3}},
                         {0, 0.412345, {0.125, 0.75, 0.0625, 0.1}}};
  EXPECT_EQ(r, expected);
  EXPECT_EQ(protocol::SerializeDetectResponse(r), body);
}

TEST(ProtocolGoldenTest, EmptyDetectionsAreValid) {
  const std::string body = Golden("detect_response_empty.json");
  const auto r = protocol::ParseDetectResponse(200, body);
  EXPECT_TRUE(r.detections.empty());
  EXPECT_EQ(r.model_id, "no_f40");
  EXPECT_EQ(protocol::SerializeDetectResponse(r), body);
}

TEST(ProtocolGoldenTest, ConfidenceAboveOneIsMalformed) {
  EXPECT_EQ(ResponseError(200, Golden("detect_response_bad_confidence.json")),
            ErrorCode::kMalformedResponse);
}

TEST(ProtocolGoldenTest, ErrorBodies) {
  EXPECT_EQ(ResponseError(404, Golden("unknown_model_404.json")), ErrorCode::kUnknownModel);
  EXPECT_EQ(protocol::UnknownModelBody("dim_f95"), Golden("unknown_model_404.json"));
  EXPECT_EQ(ResponseError(400, Golden("bad_request_400.json")), ErrorCode::kInvalidArgument);
  EXPECT_EQ(protocol::BadRequestBody("image_b64 is not valid base64"),
            Golden("bad_request_400.json"));
  EXPECT_EQ(protocol::ParseModelList(Golden("models.json")),
            (std::vector<std::string>{"dim_f90", "full_f80", "no_f40", "stub"}));
  EXPECT_TRUE(protocol::IsHealthyBody(Golden("health.json")));
}

TEST(ProtocolTest, SchemaViolationsAreMalformed) {
  const char* bodies[] = {
      "not json",
      "[]",
      R"({"frame_id":"f","model_id":"m","inference_ms":1,"detections":{}})",
      R"({"frame_id":"f","model_id":"m","detections":[]})",
      R"({"frame_id":"f","model_id":"m","inference_ms":-1,"detections":[]})",
      R"({"frame_id":"f","model_id":"m","inference_ms":1,"detections":[{"class_id":0,"confidence":0.5,"bbox":[0.5,0.5,0.2]}]})",
      R"({"frame_id":"f","model_id":"m","inference_ms":1,"detections":[{"class_id":0,"confidence":"0.5","bbox":[0.5,0.5,0.2,0.2]}]})",
      R"({"frame_id":"f","model_id":"m","inference_ms":1,"detections":[{"class_id":0,"confidence":0.5,"bbox":[1.5,0.5,0.2,0.2]}]})",
      R"({"frame_id":"f","model_id":"m","inference_ms":1,"detections":[{"class_id":0.5,"confidence":0.5,"bbox":[0.5,0.5,0.2,0.2]}]})",
  };
  for (const char* b : bodies) EXPECT_EQ(ResponseError(200, b), ErrorCode::kMalformedResponse) << b;
  EXPECT_EQ(ResponseError(404, "{}"), ErrorCode::kMalformedResponse);
  EXPECT_EQ(ResponseError(500, R"({"error":"inference_failed"})"), ErrorCode::kTransport);
  EXPECT_THROW(protocol::ParseModelList(R"({"models":[]})"), Error);
  EXPECT_FALSE(protocol::IsHealthyBody(R"({"status":"down"})"));
}

TEST(ProtocolTest, RequestRoundTripCarriesTheFrameLosslessly) {
  std::mt19937 rng(2);
  std::vector<uint8_t> px(5 * 3 * 3);
  for (auto& v : px) v = static_cast<uint8_t>(rng());
  const Frame fused(5, 3, Modality::kFused, px);
  const auto req = protocol::MakeDetectRequest(fused, "r/1", "no_f40", 4.75);
  const auto back = protocol::ParseDetectRequest(protocol::SerializeDetectRequest(req));
  EXPECT_EQ(back, req);
  EXPECT_EQ(protocol::DecodeRequestImage(back), fused);
  auto lying = req;
  lying.width = 6;
  EXPECT_THROW(protocol::DecodeRequestImage(lying), Error);
  EXPECT_THROW(protocol::ParseDetectRequest(R"({"frame_id":"f"})"), Error);
}

TEST(ProtocolTest, ResponseRoundTripIsLosslessForArbitraryDoubles) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> size(1e-6, 1.0);
  for (int t = 0; t < 200; ++t) {
    DetectionResult r;
    r.frame_id = "f" + std::to_string(t);
    r.model_id = "dim_f90";
    r.inference_latency_ms = unit(rng) * 1000.0;
    for (int i = 0; i < t % 4; ++i) {
      r.detections.push_back({0, unit(rng), {unit(rng), unit(rng), size(rng), size(rng)}});
    }
    ASSERT_EQ(protocol::ParseDetectResponse(200, protocol::SerializeDetectResponse(r)), r);
  }
}

}  // namespace
}  // namespace adaptfuse
