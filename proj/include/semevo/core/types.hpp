// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace semevo {

// All internal arithmetic is double precision. Feature matrices are
// row-major in meaning: one row per sample, one column per feature.
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

using ClassId = std::uint32_t;
using TaskId = std::uint32_t;  // 1-based

enum class ErrorCode {
  kStructural,        // shape or bookkeeping mismatch between inputs
  kDegenerateInput,   // e.g. zero-norm vector in a cosine
  kMissingClass,
  kSingular,
  kDivergence,
  kConfig,
  kIo,
  kBadMagic,
  kBadVersion,
  kTruncated,
  kDimensionMismatch,
  kNonFinite,
  kInconsistent,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace semevo
