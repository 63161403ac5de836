// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "semevo/core/types.hpp"

namespace semevo {

/// Linear map from the previous encoder's feature space to the current one.
///
/// Row convention: a feature row z maps to z * weights (+ bias when affine),
/// so stacked rows satisfy Q_old * W = Q_new.
class Projector {
 public:
  Projector() = default;
  explicit Projector(Matrix weights);
  Projector(Matrix weights, RowVector bias);

  static Projector identity(Eigen::Index dimension);

  Eigen::Index dimension() const { return weights_.rows(); }
  bool affine() const { return affine_; }
  const Matrix& weights() const { return weights_; }
  const RowVector& bias() const { return bias_; }

  RowVector apply_row(const Eigen::Ref<const RowVector>& row) const;
  Vector apply(const Eigen::Ref<const Vector>& column) const;
  Matrix apply_rows(const Eigen::Ref<const Matrix>& rows) const;

  // Stacked (d [+1]) x d coefficient matrix; the bias is the last row.
  Matrix coefficients() const;
  static Projector from_coefficients(const Matrix& coefficients, bool affine);

 private:
  Matrix weights_;
  RowVector bias_;
  bool affine_ = false;
};

}  // namespace semevo
