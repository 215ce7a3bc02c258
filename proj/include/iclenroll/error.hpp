// Copyright 2026 The icl-enroll Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICLENROLL_ERROR_HPP_
#define ICLENROLL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace iclenroll {

enum class ErrorCode {
  kIo,
  kSchema,
  kDuplicateId,
  kInsufficientSpeakers,
  kUnknownSpeaker,
  kInvalidDistribution,
  kDimMismatch,
  kZeroVector,
  kMissingEmbedding,
  kMissingScore,
  kInvalidK,
  kSpeakerMismatch,
  kQueryLeak,
  kNoEligibleSpeakers,
  kEmptyExport,
  kEmptyReference,
  kEmptyInput,
  kInsufficientStrategies,
  kBackendUnavailable,
  kRemoteError,
  kTimeout,
  kRunAborted,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// All library failures surface as Error; the code identifies the contract
// violation and the message carries the offending id/line/value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace iclenroll

#endif  // ICLENROLL_ERROR_HPP_
