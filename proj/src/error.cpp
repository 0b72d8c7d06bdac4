// SPDX-License-Identifier: Apache-2.0

#include "odal/error.hpp"

namespace odal {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kOntologyInvalid: return "OntologyInvalid";
    case ErrorCode::kUnknownPosition: return "UnknownPosition";
    case ErrorCode::kUnknownClass: return "UnknownClass";
    case ErrorCode::kMissingLabel: return "MissingLabel";
    case ErrorCode::kMalformedLabel: return "MalformedLabel";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kBackendUnreachable: return "BackendUnreachable";
    case ErrorCode::kBackendMalformedOutput: return "BackendMalformedOutput";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kJudgeUnreachable: return "JudgeUnreachable";
    case ErrorCode::kVerdictMalformed: return "VerdictMalformed";
    case ErrorCode::kEmptyRun: return "EmptyRun";
    case ErrorCode::kDuplicateFrame: return "DuplicateFrame";
  }
  return "Unknown";
}

}  // namespace odal
