// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "semevo/projector/solvers.hpp"
#include "support/testing.hpp"

namespace semevo {
namespace {

using testing::Gen;

struct Problem {
  Matrix x;
  Matrix y;
};

Problem random_problem(Gen& gen, Eigen::Index d, Eigen::Index n, double noise) {
  Problem p;
  p.x = gen.gaussian(n, d) * gen.uniform(0.5, 5.0);
  p.y = p.x * gen.gaussian(d, d) + noise * gen.gaussian(n, d);
  return p;
}

TEST(Analytic, MatchesSvdLeastSquares) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(1, 20);
    const Problem p = random_problem(gen, d, gen.integer(d + 1, 6 * d + 6), 0.3);
    const SolveResult r = solve_analytic(moments_from_rows(p.x, p.y, false));
    EXPECT_LT(testing::relative_frobenius(r.projector.weights(), testing::svd_least_squares(p.x, p.y)),
              1e-8);
    EXPECT_FALSE(r.report.ridge_applied);
    EXPECT_NEAR(r.report.residual, testing::row_residual(p.x, p.y, r.projector.weights()),
                1e-8 * (1 + r.report.residual));
  }
}

TEST(Analytic, RidgeMatchesAugmentedSvd) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(1, 10);
    const Problem p = random_problem(gen, d, gen.integer(1, 4 * d), 0.1);
    const double ridge = gen.uniform(0.01, 3.0);
    // [X; sqrt(ridge) I] W ~ [Y; 0]
    Matrix xa(p.x.rows() + d, d), ya(p.y.rows() + d, d);
    xa << p.x, std::sqrt(ridge) * Matrix::Identity(d, d);
    ya << p.y, Matrix::Zero(d, d);
    AnalyticOptions opt;
    opt.ridge = ridge;
    const SolveResult r = solve_analytic(moments_from_rows(p.x, p.y, false), opt);
    EXPECT_LT(testing::relative_frobenius(r.projector.weights(), testing::svd_least_squares(xa, ya)),
              1e-9);
  }
}

TEST(Analytic, AffineRecoversBias) {
  Gen gen(4);
  const Matrix w = gen.gaussian(5, 5);
  const RowVector b = gen.gaussian(1, 5);
  const Matrix x = gen.gaussian(40, 5);
  const Matrix y = (x * w).rowwise() + b;
  AnalyticOptions opt;
  opt.affine = true;
  const SolveResult r = solve_analytic(moments_from_rows(x, y, true), opt);
  EXPECT_TRUE(r.projector.affine());
  EXPECT_LT((r.projector.weights() - w).norm(), 1e-9);
  EXPECT_LT((r.projector.bias() - b).norm(), 1e-9);
}

TEST(Analytic, SingularPolicy) {
  // Fewer rows than dimensions: the Gram matrix is singular.
  Gen gen(5);
  const Matrix x = gen.gaussian(2, 6);
  const Matrix y = gen.gaussian(2, 6);
  const auto m = moments_from_rows(x, y, false);
  AnalyticOptions strict;
  strict.singular_policy = SingularPolicy::kStrict;
  try {
    solve_analytic(m, strict);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingular);
  }
  const SolveResult r = solve_analytic(m, AnalyticOptions{});
  EXPECT_TRUE(r.report.ridge_applied);
  EXPECT_DOUBLE_EQ(r.report.ridge, 1e-8);
  EXPECT_TRUE(r.projector.weights().allFinite());
  // Interpolates the two rows up to the tiny ridge.
  EXPECT_LT((x * r.projector.weights() - y).norm(), 1e-4);
}

TEST(Analytic, ConditionNumberMatchesSvd) {
  Gen gen(6);
  const Matrix x = gen.gaussian(30, 6);
  const auto r = solve_analytic(moments_from_rows(x, x, false));
  Eigen::JacobiSVD<Matrix> svd(x);
  const auto s = svd.singularValues();
  EXPECT_NEAR(r.report.gram_condition, std::pow(s(0) / s(s.size() - 1), 2),
              1e-8 * r.report.gram_condition);
}

TEST(Analytic, QueueOverloadUsesQueueContents) {
  Gen gen(7);
  QueuePair pair(3, 10);
  const Problem p = random_problem(gen, 3, 25, 0.2);
  pair.push(p.x, p.y);
  const Matrix tail_x = p.x.bottomRows(10), tail_y = p.y.bottomRows(10);
  EXPECT_LT(testing::relative_frobenius(solve_analytic(pair).projector.weights(),
                                        testing::svd_least_squares(tail_x, tail_y)),
            1e-8);
}

TEST(GradientDescent, OnlineStepsReduceResidual) {
  Gen gen(8);
  const Problem p = random_problem(gen, 6, 60, 0.1);
  const auto m = moments_from_rows(p.x, p.y, false);
  const double lmax = Eigen::SelfAdjointEigenSolver<Matrix>(m.gram).eigenvalues().maxCoeff();
  const double best = testing::row_residual(p.x, p.y, testing::svd_least_squares(p.x, p.y));
  for (GdOptimizer opt : {GdOptimizer::kPlain, GdOptimizer::kAdam}) {
    GdOptions o;
    o.optimizer = opt;
    o.learning_rate = opt == GdOptimizer::kPlain ? 0.5 * m.count / lmax : 0.05;
    GradientDescentSolver solver(Projector::identity(6), o);
    double prev = testing::row_residual(p.x, p.y, Matrix::Identity(6, 6));
    for (int round = 0; round < 5; ++round) {
      solver.run(m, 40);
      const double now = testing::row_residual(p.x, p.y, solver.projector().weights());
      if (prev - best > 1e-12 * best) {
        EXPECT_LT(now, prev);
      } else {
        EXPECT_LE(now - best, 1e-12 * best);
      }
      EXPECT_GE(now, best * (1 - 1e-12));
      prev = now;
    }
    EXPECT_EQ(solver.steps_taken(), 200u);
  }
}

TEST(GradientDescent, RowFormMatchesMomentForm) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(2, 12);
    const Matrix x = gen.gaussian(gen.integer(1, 30), d);
    const Matrix y = x * gen.gaussian(d, d) + 0.1 * gen.gaussian(x.rows(), d);
    const bool affine = gen.coin();
    GdOptions o;
    o.optimizer = gen.coin() ? GdOptimizer::kAdam : GdOptimizer::kPlain;
    o.learning_rate = 1e-3;
    const Projector init = affine ? Projector(gen.gaussian(d, d), gen.gaussian(1, d)) : Projector(gen.gaussian(d, d));
    GradientDescentSolver by_moments(init, o), by_rows(init, o);
    for (int round = 0; round < 3; ++round) {
      by_moments.run(moments_from_rows(x, y, affine), 4);
      by_rows.run_rows(x, y, 4);
    }
    EXPECT_LT(testing::relative_frobenius(by_rows.projector().coefficients(),
                                          by_moments.projector().coefficients()),
              1e-10);
    EXPECT_EQ(by_rows.steps_taken(), 12u);
  }
}

TEST(GradientDescent, PlainStepMatchesHandComputedUpdate) {
  Gen gen(9);
  const Problem p = random_problem(gen, 3, 10, 0.1);
  const auto m = moments_from_rows(p.x, p.y, false);
  const Matrix w0 = gen.gaussian(3, 3);
  GdOptions o;
  o.learning_rate = 1e-3;
  GradientDescentSolver solver(Projector(w0), o);
  solver.run(m, 1);
  // d/dW of ||XW - Y||^2 / n
  const Matrix grad = 2.0 / 10.0 * p.x.transpose() * (p.x * w0 - p.y);
  EXPECT_LT((solver.projector().weights() - (w0 - 1e-3 * grad)).norm(), 1e-12);
}

TEST(GradientDescent, DivergenceNamesStep) {
  Gen gen(10);
  const Problem p = random_problem(gen, 4, 20, 0.1);
  GdOptions o;
  o.learning_rate = 1e6;
  GradientDescentSolver solver(Projector::identity(4), o);
  try {
    solver.run(moments_from_rows(p.x, p.y, false), 500);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergence);
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(GradientDescent, ConvergedMatchesSvd) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(2, 8);
    const Problem p = random_problem(gen, d, 8 * d, 0.2);
    const auto r = solve_gradient_descent_converged(moments_from_rows(p.x, p.y, false),
                                                    Projector(gen.gaussian(d, d)), {});
    EXPECT_LT(testing::relative_frobenius(r.projector.weights(), testing::svd_least_squares(p.x, p.y)),
              1e-8);
    EXPECT_GT(r.report.iterations, 0u);
  }
}

TEST(Evolution, OnlyOldClassesMove) {
  Gen gen(11);
  std::map<ClassId, PrototypeEntry> entries;
  for (ClassId c = 0; c < 4; ++c) entries.emplace(c, PrototypeEntry{gen.gaussian_vector(3), 2});
  const PrototypeTable table(3, entries);
  const Projector p(gen.gaussian(3, 3));
  const PrototypeTable out = evolve_prototypes(table, p, {0, 2});
  for (ClassId c : {0u, 2u}) {
    const Vector expect = (table.at(c).prototype.transpose() * p.weights()).transpose();
    EXPECT_LT((out.at(c).prototype - expect).norm(), 1e-12);
    EXPECT_EQ(out.at(c).aligned_task, 3u);
  }
  for (ClassId c : {1u, 3u}) {
    EXPECT_EQ(out.at(c).prototype, table.at(c).prototype);
    EXPECT_EQ(out.at(c).aligned_task, 2u);
  }
  EXPECT_THROW(evolve_prototypes(table, p, {9}), Error);
}

TEST(Evolution, IdentityProjectorIsNoOp) {
  Gen gen(12);
  std::map<ClassId, PrototypeEntry> entries;
  entries.emplace(1, PrototypeEntry{gen.gaussian_vector(4), 1});
  const PrototypeTable table(4, entries);
  EXPECT_EQ(evolve_prototypes(table, Projector::identity(4), {1}).at(1).prototype,
            table.at(1).prototype);
}

}  // namespace
}  // namespace semevo
