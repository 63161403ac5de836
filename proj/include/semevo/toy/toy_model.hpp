// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "semevo/core/types.hpp"

namespace semevo::toy {

/// Two-layer dense feature extractor with a linear classification head:
///   h = tanh(x W1 + b1),  z = h W2 + b2,  logits = z H.
/// Column k of the head scores class `classes[k]`.
///
/// The same struct doubles as the gradient container: a gradient has the
/// model's shapes and an empty `classes` list is not required to match.
struct ToyModel {
  Matrix w1;
  RowVector b1;
  Matrix w2;
  RowVector b2;
  Matrix head;
  std::vector<ClassId> classes;

  static ToyModel random(Eigen::Index in_dim, Eigen::Index hidden, Eigen::Index feature_dim,
                         std::mt19937_64& rng);

  Eigen::Index in_dim() const { return w1.rows(); }
  Eigen::Index hidden() const { return w1.cols(); }
  Eigen::Index feature_dim() const { return w2.cols(); }
  std::size_t num_classes() const { return static_cast<std::size_t>(head.cols()); }

  // Appends one head column per new class, initialized with small noise.
  void add_classes(const std::vector<ClassId>& ids, std::mt19937_64& rng);
  // Head column of a class id; throws if the class is unknown.
  Eigen::Index column_of(ClassId id) const;

  Matrix features(const Eigen::Ref<const Matrix>& inputs) const;
  Matrix logits(const Eigen::Ref<const Matrix>& inputs) const;

  ToyModel zeros_like() const;
  void axpy(double alpha, const ToyModel& other);  // this += alpha * other
  double squared_norm() const;
  bool all_finite() const;
};

using ToyGradient = ToyModel;

// Frobenius norm of the extractor parameter difference (head excluded).
double extractor_distance(const ToyModel& a, const ToyModel& b);

// Versioned little-endian snapshot format.
void save_model(const ToyModel& model, const std::filesystem::path& path);
ToyModel load_model(const std::filesystem::path& path);

}  // namespace semevo::toy
