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

#ifndef ADAPTFUSE_ERROR_HPP_
#define ADAPTFUSE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace adaptfuse {

// Stable numeric codes; mirrored one-to-one by af_status in adaptfuse.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kFusion = 4,
  kRegistration = 5,
  kConfig = 6,
  kMembership = 7,
  kFixture = 8,
  kTimeout = 9,
  kTransport = 10,
  kMalformedResponse = 11,
  kUnknownModel = 12,
  kInternal = 13,
};

const char* ErrorCodeName(ErrorCode code);

// Every failure raised by the core carries one of the codes above so the C
// boundary can translate it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void Fail(ErrorCode code, const std::string& message);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_ERROR_HPP_
