// SPDX-License-Identifier: Apache-2.0
#include <deque>

#include <gtest/gtest.h>

#include "semevo/core/projector.hpp"
#include "semevo/queue/feature_queue.hpp"
#include "support/testing.hpp"

namespace semevo {
namespace {

using testing::Gen;

// Unbounded list; the queue must equal its last `capacity` rows.
struct ListOracle {
  std::deque<RowVector> rows;
  void push(const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
  }
  Matrix tail(std::size_t capacity, Eigen::Index d) const {
    const std::size_t n = std::min(capacity, rows.size());
    Matrix out(static_cast<Eigen::Index>(n), d);
    for (std::size_t i = 0; i < n; ++i) {
      out.row(static_cast<Eigen::Index>(i)) = rows[rows.size() - n + i];
    }
    return out;
  }
};

TEST(FeatureQueue, MatchesListOracle) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(1, 6);
    const auto cap = static_cast<std::size_t>(gen.integer(1, 20));
    FeatureQueue q(d, cap);
    ListOracle oracle;
    std::size_t total_dropped = 0;
    for (int step = 0; step < 30; ++step) {
      const Matrix batch = gen.gaussian(gen.integer(0, 2 * static_cast<long>(cap)), d);
      total_dropped += q.push(batch);
      oracle.push(batch);
      ASSERT_EQ(q.matrix(), oracle.tail(cap, d));
      ASSERT_EQ(q.size(), std::min(cap, oracle.rows.size()));
      ASSERT_EQ(total_dropped, oracle.rows.size() - q.size());
    }
  }
}

TEST(FeatureQueue, RowIndexIsOldestFirst) {
  FeatureQueue q(1, 3);
  Matrix m(5, 1);
  m << 1, 2, 3, 4, 5;
  q.push(m);
  EXPECT_EQ(q.row(0)(0), 3);
  EXPECT_EQ(q.row(2)(0), 5);
  EXPECT_THROW(q.row(3), Error);
}

TEST(FeatureQueue, RejectsBadShapes) {
  EXPECT_THROW(FeatureQueue(3, 0), Error);
  FeatureQueue q(3, 4);
  EXPECT_THROW(q.push(Matrix::Ones(2, 4)), Error);
}

TEST(QueuePair, PairedLengthAndRowsStayAligned) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(1, 5);
    const auto cap = static_cast<std::size_t>(gen.integer(1, 12));
    QueuePair pair(d, cap);
    ListOracle old_list, new_list;
    for (int step = 0; step < 25; ++step) {
      const Matrix o = gen.gaussian(gen.integer(0, 2 * static_cast<long>(cap)), d);
      const Matrix n = o * 2.0;
      pair.push(o, n);
      old_list.push(o);
      new_list.push(n);
      ASSERT_EQ(pair.old_queue().size(), pair.new_queue().size());
      ASSERT_EQ(pair.old_queue().matrix(), old_list.tail(cap, d));
      ASSERT_EQ(pair.new_queue().matrix(), new_list.tail(cap, d));
    }
  }
}

TEST(QueuePair, RejectsUnpairedPush) {
  QueuePair pair(2, 5);
  EXPECT_THROW(pair.push(Matrix::Ones(3, 2), Matrix::Ones(2, 2)), Error);
  EXPECT_THROW(pair.push(Matrix::Ones(1, 3), Matrix::Ones(1, 3)), Error);
  Matrix bad = Matrix::Ones(1, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(pair.push(bad, Matrix::Ones(1, 2)), Error);
  EXPECT_EQ(pair.size(), 0u);
}

TEST(QueuePair, IncrementalMomentsMatchRecomputed) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(1, 6);
    const auto cap = static_cast<std::size_t>(gen.integer(d, 40));
    QueuePair pair(d, cap);
    for (int step = 0; step < 200; ++step) {
      const Matrix o = 10.0 * gen.gaussian(gen.integer(1, 5), d);
      pair.push(o, o * gen.gaussian(d, d));
    }
    for (bool affine : {false, true}) {
      const LeastSquaresMoments m = pair.moments(affine);
      Matrix x = pair.old_queue().matrix();
      const Matrix y = pair.new_queue().matrix();
      if (affine) {
        x.conservativeResize(Eigen::NoChange, d + 1);
        x.col(d).setOnes();
      }
      const Matrix g = x.transpose() * x;
      const Matrix c = x.transpose() * y;
      EXPECT_LT((m.gram - g).norm(), 1e-9 * g.norm());
      EXPECT_LT((m.cross - c).norm(), 1e-9 * (1 + c.norm()));
      EXPECT_NEAR(m.target_sq, y.squaredNorm(), 1e-9 * y.squaredNorm());
      EXPECT_EQ(m.count, static_cast<double>(pair.size()));
    }
  }
}

TEST(PseudoFeatures, FullRankWithNoise) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Gen gen(seed);
    const Eigen::Index d = gen.integer(1, 10);
    std::map<ClassId, PrototypeEntry> entries;
    const long classes = gen.integer(1, 4);
    for (long c = 0; c < classes; ++c) {
      entries.emplace(static_cast<ClassId>(c), PrototypeEntry{5.0 * gen.gaussian_vector(d), 1});
    }
    const PrototypeTable table(d, entries);
    const auto cap = static_cast<std::size_t>(gen.integer(d, 4 * d));
    const auto init = init_with_pseudo_features(table, Projector::identity(d), cap, 0.02, seed);
    EXPECT_FALSE(init.rank_deficient);
    const Matrix x = init.queues.old_queue().matrix();
    Eigen::JacobiSVD<Matrix> svd(x);
    EXPECT_EQ(svd.rank(), d);
  }
}

TEST(PseudoFeatures, NewRowsAreProjectedOldRows) {
  Gen gen(2);
  std::map<ClassId, PrototypeEntry> entries;
  entries.emplace(0, PrototypeEntry{gen.gaussian_vector(3), 1});
  entries.emplace(5, PrototypeEntry{gen.gaussian_vector(3), 1});
  const Projector p(gen.gaussian(3, 3));
  const auto init = init_with_pseudo_features(PrototypeTable(3, entries), p, 50, 0.2, 11);
  EXPECT_EQ(init.queues.size(), 50u);
  const Matrix o = init.queues.old_queue().matrix();
  EXPECT_LT((o * p.weights() - init.queues.new_queue().matrix()).norm(), 1e-12);
  // Every old row sits near one of the two prototypes.
  for (Eigen::Index r = 0; r < o.rows(); ++r) {
    const double d0 = (o.row(r).transpose() - entries.at(0).prototype).norm();
    const double d5 = (o.row(r).transpose() - entries.at(5).prototype).norm();
    EXPECT_LT(std::min(d0, d5), 0.2 * 8);
  }
}

TEST(PseudoFeatures, ZeroNoiseFlagsRankDeficiency) {
  std::map<ClassId, PrototypeEntry> entries;
  entries.emplace(0, PrototypeEntry{Vector::Ones(4), 1});
  const auto init = init_with_pseudo_features(PrototypeTable(4, entries), Projector::identity(4),
                                              20, 0.0, 1);
  EXPECT_TRUE(init.rank_deficient);
}

TEST(PseudoFeatures, RequiresOldClasses) {
  EXPECT_THROW(init_with_pseudo_features(PrototypeTable(), Projector::identity(2), 10, 0.02, 1),
               Error);
}

}  // namespace
}  // namespace semevo
