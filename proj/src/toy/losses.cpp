// SPDX-License-Identifier: Apache-2.0
#include "semevo/toy/losses.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace semevo::toy {

namespace {

struct Forward {
  Matrix hidden;    // tanh activations
  Matrix features;  // z
  Matrix logits;
};

Forward forward(const ToyModel& m, const Eigen::Ref<const Matrix>& x) {
  if (x.cols() != m.in_dim()) {
    throw Error(ErrorCode::kStructural, "batch dimension " + std::to_string(x.cols()) +
                                            " does not match model input " +
                                            std::to_string(m.in_dim()));
  }
  Forward f;
  f.hidden = ((x * m.w1).rowwise() + m.b1).array().tanh().matrix();
  f.features = (f.hidden * m.w2).rowwise() + m.b2;
  f.logits = f.features * m.head;
  return f;
}

// Gradient from upstream derivatives with respect to logits and features.
ToyGradient backprop(const ToyModel& m, const Eigen::Ref<const Matrix>& x, const Forward& f,
                     const Matrix* d_logits, const Matrix* d_features) {
  ToyGradient g = m.zeros_like();
  Matrix dz = Matrix::Zero(f.features.rows(), f.features.cols());
  if (d_logits) {
    g.head = f.features.transpose() * *d_logits;
    dz += *d_logits * m.head.transpose();
  }
  if (d_features) dz += *d_features;
  g.w2 = f.hidden.transpose() * dz;
  g.b2 = dz.colwise().sum();
  const Matrix da = ((dz * m.w2.transpose()).array() * (1.0 - f.hidden.array().square())).matrix();
  g.w1 = x.transpose() * da;
  g.b1 = da.colwise().sum();
  return g;
}

// Row-wise softmax over the leading `cols` columns.
Matrix softmax_rows(const Matrix& logits, Eigen::Index cols) {
  Matrix p = logits.leftCols(cols);
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double mx = p.row(i).maxCoeff();
    p.row(i) = (p.row(i).array() - mx).exp().matrix();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

void check_labels(const std::vector<Eigen::Index>& labels, Eigen::Index rows, Eigen::Index width) {
  if (static_cast<Eigen::Index>(labels.size()) != rows) {
    throw Error(ErrorCode::kStructural, "label count does not match batch rows");
  }
  for (Eigen::Index y : labels) {
    if (y < 0 || y >= width) {
      throw Error(ErrorCode::kStructural, "label " + std::to_string(y) +
                                              " outside head width " + std::to_string(width));
    }
  }
}

}  // namespace

LossResult ce_loss(const ToyModel& model, const Eigen::Ref<const Matrix>& inputs,
                   const std::vector<Eigen::Index>& labels) {
  check_labels(labels, inputs.rows(), model.head.cols());
  if (inputs.rows() == 0) throw Error(ErrorCode::kDegenerateInput, "empty batch");
  const Forward f = forward(model, inputs);
  const auto n = static_cast<double>(inputs.rows());
  Matrix d_logits = softmax_rows(f.logits, f.logits.cols());
  double loss = 0.0;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    const Eigen::Index y = labels[static_cast<std::size_t>(i)];
    const double mx = f.logits.row(i).maxCoeff();
    const double lse = mx + std::log((f.logits.row(i).array() - mx).exp().sum());
    loss += lse - f.logits(i, y);
    d_logits(i, y) -= 1.0;
  }
  d_logits /= n;
  return {loss / n, backprop(model, inputs, f, &d_logits, nullptr), false};
}

LossResult kd_loss(const ToyModel& model, const ToyModel& old_model,
                   const Eigen::Ref<const Matrix>& inputs, std::size_t old_class_count,
                   bool renormalize) {
  if (old_class_count == 0) return {0.0, model.zeros_like(), true};
  if (old_model.num_classes() != old_class_count || old_class_count > model.num_classes()) {
    throw Error(ErrorCode::kStructural, "old model head width must equal the old class count "
                                        "and not exceed the current head width");
  }
  if (inputs.rows() == 0) throw Error(ErrorCode::kDegenerateInput, "empty batch");
  const auto k_old = static_cast<Eigen::Index>(old_class_count);
  const Matrix targets = softmax_rows(old_model.logits(inputs), k_old);
  const Forward f = forward(model, inputs);
  const Matrix probs = softmax_rows(f.logits, renormalize ? k_old : f.logits.cols());
  const auto n = static_cast<double>(inputs.rows());

  double loss = 0.0;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    for (Eigen::Index k = 0; k < k_old; ++k) {
      if (targets(i, k) > 0) loss -= targets(i, k) * std::log(probs(i, k));
    }
  }
  // Both variants reduce to (p - q) on the softmax support because each
  // target row sums to one.
  Matrix d_logits = Matrix::Zero(f.logits.rows(), f.logits.cols());
  d_logits.leftCols(probs.cols()) = probs;
  d_logits.leftCols(k_old) -= targets;
  d_logits /= n;
  return {loss / n, backprop(model, inputs, f, &d_logits, nullptr), false};
}

LossResult scl_loss(const ToyModel& model, const Eigen::Ref<const Matrix>& inputs,
                    const std::vector<Eigen::Index>& labels, double tau, bool normalize,
                    SclDenominator denominator) {
  if (!(tau > 0)) throw Error(ErrorCode::kConfig, "tau must be positive");
  if (static_cast<Eigen::Index>(labels.size()) != inputs.rows()) {
    throw Error(ErrorCode::kStructural, "label count does not match batch rows");
  }
  if (inputs.rows() == 0) throw Error(ErrorCode::kDegenerateInput, "empty batch");
  const Forward f = forward(model, inputs);
  const Eigen::Index n = inputs.rows();

  Matrix u = f.features;
  Vector norms = Vector::Ones(n);
  if (normalize) {
    for (Eigen::Index i = 0; i < n; ++i) {
      norms(i) = u.row(i).norm();
      if (norms(i) == 0.0) {
        throw Error(ErrorCode::kDegenerateInput, "zero feature in contrastive batch");
      }
      u.row(i) /= norms(i);
    }
  }
  const Matrix s = (u * u.transpose()) / tau;

  // g(i, j) = d loss / d s(i, j)
  Matrix g = Matrix::Zero(n, n);
  double loss = 0.0;
  bool any = false;
  std::vector<Eigen::Index> pos, den;
  for (Eigen::Index i = 0; i < n; ++i) {
    pos.clear();
    den.clear();
    const Eigen::Index yi = labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool same = labels[static_cast<std::size_t>(j)] == yi;
      if (same) pos.push_back(j);
      if (!same || denominator == SclDenominator::kAll) den.push_back(j);
    }
    if (pos.empty() || den.empty()) continue;
    any = true;
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k : den) mx = std::max(mx, s(i, k));
    double z = 0.0;
    for (Eigen::Index k : den) z += std::exp(s(i, k) - mx);
    const double lse = mx + std::log(z);
    const auto np = static_cast<double>(pos.size());
    for (Eigen::Index p : pos) {
      loss += lse - s(i, p);
      g(i, p) -= 1.0;
    }
    for (Eigen::Index k : den) g(i, k) += np * std::exp(s(i, k) - lse);
  }
  if (!any) return {0.0, model.zeros_like(), true};
  loss /= static_cast<double>(n);
  g /= static_cast<double>(n);

  const Matrix du = ((g + g.transpose()) * u) / tau;
  Matrix dz = du;
  if (normalize) {
    for (Eigen::Index i = 0; i < n; ++i) {
      dz.row(i) = (du.row(i) - u.row(i) * u.row(i).dot(du.row(i))) / norms(i);
    }
  }
  ToyGradient grad = backprop(model, inputs, f, nullptr, &dz);
  return {loss, std::move(grad), false};
}

LossResult base_loss(const ToyModel& model, const ToyModel* old_model,
                     const Eigen::Ref<const Matrix>& inputs,
                     const std::vector<Eigen::Index>& labels, const LossWeights& weights,
                     const LossOptions& options) {
  LossResult total = ce_loss(model, inputs, labels);
  if (old_model && weights.lambda1 != 0.0 && old_model->num_classes() > 0) {
    const LossResult kd =
        kd_loss(model, *old_model, inputs, old_model->num_classes(), options.kd_renormalize);
    total.value += weights.lambda1 * kd.value;
    total.gradient.axpy(weights.lambda1, kd.gradient);
  }
  if (weights.lambda2 != 0.0) {
    const LossResult scl = scl_loss(model, inputs, labels, weights.tau, options.scl_normalize,
                                    options.scl_denominator);
    total.value += weights.lambda2 * scl.value;
    total.gradient.axpy(weights.lambda2, scl.gradient);
  }
  return total;
}

}  // namespace semevo::toy
