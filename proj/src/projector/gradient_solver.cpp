// SPDX-License-Identifier: Apache-2.0
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "semevo/projector/solvers.hpp"

namespace semevo {

GradientDescentSolver::GradientDescentSolver(Projector init, GdOptions options)
    : projector_(std::move(init)), options_(options) {
  if (!(options_.learning_rate > 0.0)) {
    throw Error(ErrorCode::kConfig, "gradient descent learning rate must be positive");
  }
}

void GradientDescentSolver::run(const LeastSquaresMoments& moments, std::size_t steps) {
  if (steps == 0) return;
  if (moments.count <= 0) throw Error(ErrorCode::kStructural, "gradient descent on zero rows");
  Matrix w = projector_.coefficients();
  if (w.rows() != moments.gram.rows()) {
    throw Error(ErrorCode::kStructural, "projector does not match moment dimensions");
  }
  const double scale = 2.0 / moments.count;
  Matrix grad(w.rows(), w.cols());
  for (std::size_t s = 0; s < steps; ++s) {
    grad.noalias() = moments.gram * w;
    const double loss =
        (grad.cwiseProduct(w).sum() - 2.0 * moments.cross.cwiseProduct(w).sum() +
         moments.target_sq) /
        moments.count;
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergence,
                  "non-finite loss at gradient step " + std::to_string(steps_taken_));
    }
    grad -= moments.cross;
    grad *= scale;
    update(w, grad);
  }
  projector_ = Projector::from_coefficients(w, moments.affine);
}

void GradientDescentSolver::run_rows(const Matrix& old_rows, const Matrix& new_rows,
                                     std::size_t steps) {
  if (steps == 0) return;
  if (old_rows.rows() == 0) throw Error(ErrorCode::kStructural, "gradient descent on zero rows");
  if (old_rows.rows() != new_rows.rows() || old_rows.cols() != new_rows.cols()) {
    throw Error(ErrorCode::kStructural, "unpaired gradient descent rows");
  }
  const bool affine = projector_.affine();
  Matrix x = old_rows;
  if (affine) {
    x.conservativeResize(Eigen::NoChange, old_rows.cols() + 1);
    x.col(old_rows.cols()).setOnes();
  }
  Matrix w = projector_.coefficients();
  if (w.rows() != x.cols() || w.cols() != new_rows.cols()) {
    throw Error(ErrorCode::kStructural, "projector does not match row dimensions");
  }
  const double scale = 2.0 / static_cast<double>(x.rows());
  Matrix r(x.rows(), w.cols());
  Matrix grad(w.rows(), w.cols());
  for (std::size_t s = 0; s < steps; ++s) {
    r.noalias() = x * w;
    r -= new_rows;
    if (!r.allFinite()) {
      throw Error(ErrorCode::kDivergence,
                  "non-finite loss at gradient step " + std::to_string(steps_taken_));
    }
    grad.noalias() = scale * x.transpose() * r;
    update(w, grad);
  }
  projector_ = Projector::from_coefficients(w, affine);
}

void GradientDescentSolver::update(Matrix& w, const Matrix& grad) {
  if (options_.optimizer == GdOptimizer::kAdam && first_moment_.size() == 0) {
    first_moment_ = Matrix::Zero(w.rows(), w.cols());
    second_moment_ = Matrix::Zero(w.rows(), w.cols());
  }
  ++steps_taken_;
  if (options_.optimizer == GdOptimizer::kPlain) {
    w -= options_.learning_rate * grad;
  } else {
    first_moment_ = options_.beta1 * first_moment_ + (1.0 - options_.beta1) * grad;
    second_moment_ = options_.beta2 * second_moment_ + (1.0 - options_.beta2) * grad.cwiseAbs2();
    const double t = static_cast<double>(steps_taken_);
    const double c1 = 1.0 - std::pow(options_.beta1, t);
    const double c2 = 1.0 - std::pow(options_.beta2, t);
    w.array() -= options_.learning_rate * (first_moment_.array() / c1) /
                 ((second_moment_.array() / c2).sqrt() + options_.epsilon);
  }
  if (!w.allFinite()) {
    throw Error(ErrorCode::kDivergence,
                "non-finite weights at gradient step " + std::to_string(steps_taken_));
  }
}

SolveResult solve_gradient_descent(const QueuePair& pair, const Projector& init,
                                   const GdOptions& options, std::size_t steps) {
  const auto start = std::chrono::steady_clock::now();
  const LeastSquaresMoments moments = pair.moments(init.affine());
  GradientDescentSolver solver(init, options);
  solver.run(moments, steps);
  SolveResult out{solver.projector(), {}};
  out.report.iterations = steps;
  out.report.residual = mean_squared_residual(moments, out.projector);
  out.report.gram_condition = std::nan("");
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SolveResult solve_gradient_descent_converged(const LeastSquaresMoments& moments,
                                             const Projector& init,
                                             const ConvergenceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (moments.count <= 0) throw Error(ErrorCode::kStructural, "gradient descent on zero rows");
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(moments.gram, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = std::max(0.0, eig.eigenvalues().minCoeff());
  if (!(hi > 0.0)) throw Error(ErrorCode::kSingular, "Gram matrix is zero");
  // Hessian of the mean squared residual is (2/n) G.
  const double step = moments.count / (hi + lo);

  Matrix w = init.coefficients();
  const double gram_norm = moments.gram.norm();
  const double cross_norm = moments.cross.norm();
  Matrix grad(w.rows(), w.cols());
  std::size_t s = 0;
  for (; s < options.max_steps; ++s) {
    grad.noalias() = moments.gram * w;
    grad -= moments.cross;
    const double gnorm = grad.norm();
    if (!std::isfinite(gnorm)) {
      throw Error(ErrorCode::kDivergence, "non-finite gradient at step " + std::to_string(s));
    }
    if (gnorm <= options.tolerance * (gram_norm * w.norm() + cross_norm)) break;
    w -= (2.0 / moments.count) * step * grad;
  }

  SolveResult out{Projector::from_coefficients(w, moments.affine), {}};
  out.report.iterations = s;
  out.report.residual = mean_squared_residual(moments, out.projector);
  out.report.gram_condition = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace semevo
