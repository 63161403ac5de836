// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "semevo/toy/toy_model.hpp"

namespace semevo::toy {

struct LossWeights {
  double lambda1 = 10.0;  // distillation
  double lambda2 = 0.1;   // supervised contrastive
  double tau = 0.1;       // contrastive temperature
};

enum class SclDenominator {
  kNegatives,  // other-class samples only
  kAll,        // every non-anchor sample
};

struct LossOptions {
  bool kd_renormalize = true;
  bool scl_normalize = true;
  SclDenominator scl_denominator = SclDenominator::kNegatives;
};

struct LossResult {
  double value = 0.0;
  ToyGradient gradient;
  bool degenerate = false;  // no term could be formed; value and gradient are zero
};

// Labels are head column indices. All losses are averaged over the batch rows.
LossResult ce_loss(const ToyModel& model, const Eigen::Ref<const Matrix>& inputs,
                   const std::vector<Eigen::Index>& labels);

// Distillation over the first `old_class_count` head columns, with the old
// model's softmax as constant targets.
LossResult kd_loss(const ToyModel& model, const ToyModel& old_model,
                   const Eigen::Ref<const Matrix>& inputs, std::size_t old_class_count,
                   bool renormalize = true);

// Head parameters receive zero gradient.
LossResult scl_loss(const ToyModel& model, const Eigen::Ref<const Matrix>& inputs,
                    const std::vector<Eigen::Index>& labels, double tau, bool normalize = true,
                    SclDenominator denominator = SclDenominator::kNegatives);

// ce + lambda1 * kd + lambda2 * scl. Terms with zero weight are skipped, and the
// distillation term is skipped without an old model.
LossResult base_loss(const ToyModel& model, const ToyModel* old_model,
                     const Eigen::Ref<const Matrix>& inputs,
                     const std::vector<Eigen::Index>& labels, const LossWeights& weights,
                     const LossOptions& options = {});

}  // namespace semevo::toy
