// SPDX-License-Identifier: Apache-2.0
#include "semevo/core/types.hpp"

namespace semevo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kStructural: return "structural";
    case ErrorCode::kDegenerateInput: return "degenerate-input";
    case ErrorCode::kMissingClass: return "missing-class";
    case ErrorCode::kSingular: return "singular";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kBadVersion: return "bad-version";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kDimensionMismatch: return "dimension-mismatch";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kInconsistent: return "inconsistent";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace semevo
