// SPDX-License-Identifier: Apache-2.0
#include "semevo/core/projector.hpp"

#include <string>

namespace semevo {

Projector::Projector(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols()) {
    throw Error(ErrorCode::kStructural, "projector weights must be square");
  }
  if (!weights_.allFinite()) throw Error(ErrorCode::kNonFinite, "projector weights");
  bias_ = RowVector::Zero(weights_.cols());
}

Projector::Projector(Matrix weights, RowVector bias) : Projector(std::move(weights)) {
  if (bias.size() != weights_.cols()) {
    throw Error(ErrorCode::kStructural, "projector bias has dimension " +
                                            std::to_string(bias.size()));
  }
  if (!bias.allFinite()) throw Error(ErrorCode::kNonFinite, "projector bias");
  bias_ = std::move(bias);
  affine_ = true;
}

Projector Projector::identity(Eigen::Index dimension) {
  return Projector(Matrix::Identity(dimension, dimension));
}

RowVector Projector::apply_row(const Eigen::Ref<const RowVector>& row) const {
  if (row.size() != dimension()) {
    throw Error(ErrorCode::kStructural, "projector of dimension " + std::to_string(dimension()) +
                                            " applied to a vector of dimension " +
                                            std::to_string(row.size()));
  }
  RowVector out = row * weights_;
  if (affine_) out += bias_;
  return out;
}

Vector Projector::apply(const Eigen::Ref<const Vector>& column) const {
  return apply_row(column.transpose()).transpose();
}

Matrix Projector::apply_rows(const Eigen::Ref<const Matrix>& rows) const {
  if (rows.cols() != dimension()) {
    throw Error(ErrorCode::kStructural, "projector of dimension " + std::to_string(dimension()) +
                                            " applied to rows of dimension " +
                                            std::to_string(rows.cols()));
  }
  Matrix out = rows * weights_;
  if (affine_) out.rowwise() += bias_;
  return out;
}

Matrix Projector::coefficients() const {
  if (!affine_) return weights_;
  Matrix out(weights_.rows() + 1, weights_.cols());
  out.topRows(weights_.rows()) = weights_;
  out.bottomRows(1) = bias_;
  return out;
}

Projector Projector::from_coefficients(const Matrix& coefficients, bool affine) {
  if (!affine) return Projector(coefficients);
  const Eigen::Index d = coefficients.cols();
  if (coefficients.rows() != d + 1) {
    throw Error(ErrorCode::kStructural, "affine coefficients must be (d+1) x d");
  }
  return Projector(coefficients.topRows(d), coefficients.bottomRows(1));
}

}  // namespace semevo
