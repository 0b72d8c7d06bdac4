// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace odal {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kOntologyInvalid,
  kUnknownPosition,
  kUnknownClass,
  kMissingLabel,
  kMalformedLabel,
  kEmptyDataset,
  kBadMagic,
  kUnsupportedVersion,
  kLengthMismatch,
  kChecksumMismatch,
  kBackendUnreachable,
  kBackendMalformedOutput,
  kConfigInvalid,
  kJudgeUnreachable,
  kVerdictMalformed,
  kEmptyRun,
  kDuplicateFrame,
};

std::string_view error_code_name(ErrorCode code);

// All domain failures are reported through this type; the code lets callers
// distinguish e.g. corruption in transit from a truncated stream.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace odal
