// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <limits>
#include <string>

#include "semevo/projector/solvers.hpp"

namespace semevo {

namespace {

double condition_number(const Matrix& symmetric) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetric, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

double mean_squared_residual(const LeastSquaresMoments& moments, const Projector& projector) {
  if (moments.count <= 0) throw Error(ErrorCode::kStructural, "residual over zero rows");
  const Matrix w = projector.coefficients();
  if (w.rows() != moments.gram.rows()) {
    throw Error(ErrorCode::kStructural, "projector does not match moment dimensions");
  }
  const double quad = (moments.gram * w).cwiseProduct(w).sum();
  const double lin = moments.cross.cwiseProduct(w).sum();
  const double sse = quad - 2.0 * lin + moments.target_sq;
  return std::max(0.0, sse) / moments.count;
}

SolveResult solve_analytic(const LeastSquaresMoments& moments, const AnalyticOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (moments.count <= 0) throw Error(ErrorCode::kStructural, "analytic solve on empty queues");
  if (options.ridge < 0 || options.min_ridge < 0) {
    throw Error(ErrorCode::kConfig, "ridge must be non-negative");
  }
  const Eigen::Index m = moments.gram.rows();

  SolveReport report;
  report.ridge = options.ridge;
  Matrix system = moments.gram;
  system.diagonal().array() += report.ridge;
  report.gram_condition = condition_number(system);

  if (options.ridge == 0.0 && !(report.gram_condition <= options.condition_threshold)) {
    if (options.singular_policy == SingularPolicy::kStrict) {
      throw Error(ErrorCode::kSingular, "Gram matrix condition number " +
                                            std::to_string(report.gram_condition) +
                                            " exceeds " +
                                            std::to_string(options.condition_threshold));
    }
    report.ridge = options.min_ridge;
    report.ridge_applied = true;
    system.diagonal().array() += report.ridge;
    report.gram_condition = condition_number(system);
  }

  const Eigen::LDLT<Matrix> ldlt(system);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingular, "LDL^T factorization of the Gram matrix failed");
  }
  const Matrix coefficients = ldlt.solve(moments.cross);
  if (!coefficients.allFinite() || coefficients.rows() != m) {
    throw Error(ErrorCode::kSingular, "non-finite least-squares solution");
  }

  SolveResult out{Projector::from_coefficients(coefficients, moments.affine), report};
  out.report.residual = mean_squared_residual(moments, out.projector);
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SolveResult solve_analytic(const QueuePair& pair, const AnalyticOptions& options) {
  return solve_analytic(pair.moments(options.affine), options);
}

PrototypeTable evolve_prototypes(const PrototypeTable& prototypes, const Projector& projector,
                                 const std::set<ClassId>& old_classes) {
  auto entries = prototypes.entries();
  for (ClassId id : old_classes) {
    auto it = entries.find(id);
    if (it == entries.end()) {
      throw Error(ErrorCode::kMissingClass,
                  "cannot evolve class " + std::to_string(id) + ": not in prototype table");
    }
    it->second.prototype = projector.apply(it->second.prototype);
    it->second.aligned_task += 1;
  }
  return PrototypeTable(prototypes.dimension(), std::move(entries));
}

}  // namespace semevo
