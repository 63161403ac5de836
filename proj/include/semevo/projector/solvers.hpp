// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <set>

#include "semevo/core/projector.hpp"
#include "semevo/core/prototypes.hpp"
#include "semevo/queue/feature_queue.hpp"

namespace semevo {

struct SolveReport {
  double residual = 0;        // ||Q_old W - Q_new||_F^2 / n
  double gram_condition = 0;  // of the (ridged) Gram matrix; +inf when singular
  bool ridge_applied = false; // fallback ridge was used
  double ridge = 0;           // ridge actually used
  double wall_time = 0;       // seconds
  std::size_t iterations = 0; // gradient steps, 0 for the closed form
};

struct SolveResult {
  Projector projector;
  SolveReport report;
};

enum class SingularPolicy { kStrict, kFallback };

struct AnalyticOptions {
  double ridge = 0.0;
  double min_ridge = 1e-8;
  double condition_threshold = 1e12;
  SingularPolicy singular_policy = SingularPolicy::kFallback;
  bool affine = false;
};

// Mean squared row residual of a projector on the given moments.
double mean_squared_residual(const LeastSquaresMoments& moments, const Projector& projector);

// Closed-form least squares: W = (G + ridge I)^-1 Q_old^T Q_new, solved by a
// pivoted LDL^T factorization of the ridged Gram matrix.
SolveResult solve_analytic(const LeastSquaresMoments& moments, const AnalyticOptions& options = {});
SolveResult solve_analytic(const QueuePair& pair, const AnalyticOptions& options = {});

enum class GdOptimizer { kPlain, kAdam };

struct GdOptions {
  double learning_rate = 1e-3;
  GdOptimizer optimizer = GdOptimizer::kPlain;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Full-batch gradient descent on the mean squared residual. Optimizer state
/// (step count, moment estimates) persists across run() calls so the solver
/// can be driven online one batch at a time.
class GradientDescentSolver {
 public:
  GradientDescentSolver(Projector init, GdOptions options);

  // Takes `steps` updates on the given moments. Throws kDivergence naming the
  // step at which the loss stopped being finite.
  void run(const LeastSquaresMoments& moments, std::size_t steps);
  // Same updates computed from the rows, Xt (X W - Y) per step, O(n d^2).
  // Cheaper than the moment form when the batch has fewer rows than d.
  void run_rows(const Matrix& old_rows, const Matrix& new_rows, std::size_t steps);

  const Projector& projector() const { return projector_; }
  std::size_t steps_taken() const { return steps_taken_; }

 private:
  void update(Matrix& w, const Matrix& grad);

  Projector projector_;
  GdOptions options_;
  Matrix first_moment_;
  Matrix second_moment_;
  std::size_t steps_taken_ = 0;
};

SolveResult solve_gradient_descent(const QueuePair& pair, const Projector& init,
                                   const GdOptions& options, std::size_t steps);

struct ConvergenceOptions {
  double tolerance = 1e-12;    // relative gradient norm
  std::size_t max_steps = 200000;
};

// Offline gradient descent to convergence. Uses the step 2 / (L + mu) from
// the Gram spectrum, which is the fastest fixed step for a quadratic.
SolveResult solve_gradient_descent_converged(const LeastSquaresMoments& moments,
                                             const Projector& init,
                                             const ConvergenceOptions& options);

// Maps the prototypes of `old_classes` through the projector and bumps their
// aligned task; other entries are copied unchanged.
PrototypeTable evolve_prototypes(const PrototypeTable& prototypes, const Projector& projector,
                                 const std::set<ClassId>& old_classes);

}  // namespace semevo
