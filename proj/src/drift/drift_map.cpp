// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include "semevo/drift/drift_sim.hpp"

namespace semevo {

namespace {

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

// Cayley transform of a random skew-symmetric generator; exactly orthogonal
// up to rounding and equal to the identity at zero magnitude.
Matrix random_rotation(Eigen::Index d, double magnitude, std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(d, d, rng);
  const Matrix skew = (g - g.transpose()) * (magnitude / (2.0 * std::sqrt(static_cast<double>(d))));
  const Matrix id = Matrix::Identity(d, d);
  return (id - 0.5 * skew).partialPivLu().solve(id + 0.5 * skew);
}

double cond(const Matrix& m) {
  const Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double lo = s.minCoeff();
  return lo > 0 ? s.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

Matrix well_conditioned_perturbation(Eigen::Index d, double magnitude, double bound,
                                     std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix a = Matrix::Identity(d, d) +
               gaussian_matrix(d, d, rng) * (magnitude / std::sqrt(static_cast<double>(d)));
    if (cond(a) <= bound) return a;
  }
  throw Error(ErrorCode::kConfig, "could not sample a drift matrix within the condition bound; "
                                  "lower drift_magnitude or raise drift_condition_bound");
}

}  // namespace

const char* to_string(DriftKind kind) {
  switch (kind) {
    case DriftKind::kIdentity: return "identity";
    case DriftKind::kRotation: return "rotation";
    case DriftKind::kScaledRotation: return "scaled_rotation";
    case DriftKind::kGeneralAffine: return "general_affine";
    case DriftKind::kNonlinear: return "nonlinear";
  }
  return "unknown";
}

DriftKind parse_drift_kind(const std::string& name) {
  for (auto k : {DriftKind::kIdentity, DriftKind::kRotation, DriftKind::kScaledRotation,
                 DriftKind::kGeneralAffine, DriftKind::kNonlinear}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorCode::kConfig, "unknown drift kind '" + name + "'");
}

DriftMap DriftMap::sample(const DriftSpec& spec, Eigen::Index d, std::mt19937_64& rng) {
  if (spec.magnitude < 0 || spec.observation_noise < 0 || spec.nonlinear_amplitude < 0 ||
      spec.nonlinear_frequency < 0) {
    throw Error(ErrorCode::kConfig, "drift parameters must be non-negative");
  }
  DriftMap map;
  map.kind_ = spec.kind;
  switch (spec.kind) {
    case DriftKind::kIdentity:
      map.linear_ = Matrix::Identity(d, d);
      break;
    case DriftKind::kRotation:
      map.linear_ = random_rotation(d, spec.magnitude, rng);
      break;
    case DriftKind::kScaledRotation:
      if (!(spec.scale > 0)) throw Error(ErrorCode::kConfig, "drift scale must be positive");
      map.linear_ = spec.scale * random_rotation(d, spec.magnitude, rng);
      break;
    case DriftKind::kGeneralAffine:
      map.linear_ = well_conditioned_perturbation(d, spec.magnitude, spec.condition_bound, rng);
      break;
    case DriftKind::kNonlinear:
      map.linear_ = well_conditioned_perturbation(d, spec.magnitude, spec.condition_bound, rng);
      map.frequencies_ = spec.nonlinear_frequency * gaussian_matrix(d, d, rng) /
                         std::sqrt(static_cast<double>(d));
      map.amplitude_ = spec.nonlinear_amplitude;
      break;
  }
  return map;
}

DriftMap DriftMap::linear_map(Matrix linear) {
  DriftMap map;
  map.kind_ = DriftKind::kGeneralAffine;
  map.linear_ = std::move(linear);
  return map;
}

double DriftMap::condition_number() const { return cond(linear_); }

Matrix DriftMap::apply(const Eigen::Ref<const Matrix>& rows) const {
  if (kind_ == DriftKind::kIdentity) return rows;
  Matrix out = rows * linear_;
  if (amplitude_ != 0.0) out += amplitude_ * (rows * frequencies_).array().sin().matrix();
  return out;
}

}  // namespace semevo
