// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "semevo/core/projector.hpp"
#include "semevo/core/prototypes.hpp"

namespace semevo {

/// Bounded FIFO of feature rows backed by a ring buffer.
class FeatureQueue {
 public:
  FeatureQueue(Eigen::Index dimension, std::size_t capacity);

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  Eigen::Index dimension() const { return storage_.cols(); }
  bool empty() const { return size_ == 0; }
  bool full() const { return size_ == capacity_; }

  // Appends rows at the back and drops as many from the front as needed to
  // stay within capacity. Returns the number of rows dropped.
  std::size_t push(const Eigen::Ref<const Matrix>& rows);

  // i-th oldest row.
  RowVector row(std::size_t i) const;
  // size() x dimension() matrix, oldest row first.
  Matrix matrix() const;

 private:
  friend class QueuePair;

  std::size_t slot(std::size_t i) const { return (head_ + i) % capacity_; }

  Matrix storage_;
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

/// Sufficient statistics of a paired least-squares problem X W ~ Y.
/// With an affine model X carries a trailing constant-one column.
struct LeastSquaresMoments {
  Matrix gram;            // X^T X
  Matrix cross;           // X^T Y
  double target_sq = 0;   // sum of squared entries of Y
  double count = 0;       // number of rows
  bool affine = false;
};

LeastSquaresMoments moments_from_rows(const Eigen::Ref<const Matrix>& old_rows,
                                      const Eigen::Ref<const Matrix>& new_rows, bool affine);

/// Paired queues of old-encoder and new-encoder features. Row i of both
/// queues always comes from the same input, so the two queues share length
/// and capacity at all times.
///
/// Gram and cross-product sums are maintained incrementally on push and
/// recomputed from storage after every `capacity` evictions, which keeps
/// rounding drift bounded.
class QueuePair {
 public:
  QueuePair(Eigen::Index dimension, std::size_t capacity);

  void push(const Eigen::Ref<const Matrix>& old_rows, const Eigen::Ref<const Matrix>& new_rows);

  const FeatureQueue& old_queue() const { return old_; }
  const FeatureQueue& new_queue() const { return new_; }
  std::size_t size() const { return old_.size(); }
  std::size_t capacity() const { return old_.capacity(); }
  Eigen::Index dimension() const { return old_.dimension(); }
  bool empty() const { return old_.empty(); }

  LeastSquaresMoments moments(bool affine = false) const;
  void refresh_moments();

 private:
  void add_row(const Eigen::Ref<const RowVector>& o, const Eigen::Ref<const RowVector>& n,
               double sign);

  FeatureQueue old_;
  FeatureQueue new_;
  Matrix gram_;
  Matrix cross_;
  RowVector old_sum_;
  RowVector new_sum_;
  double target_sq_ = 0;
  std::size_t evictions_since_refresh_ = 0;
};

struct PseudoFeatureInit {
  QueuePair queues;
  // Set when the queue cannot reach full Gram rank from pseudo-features
  // alone: fewer rows than dimensions, or zero noise with fewer distinct
  // classes drawn than dimensions.
  bool rank_deficient = false;
};

// Fills both queues with `capacity` pseudo-features: each old row is the
// prototype of a uniformly drawn old class plus noise_scale * N(0, I), each
// new row is that old row mapped through `projector`.
PseudoFeatureInit init_with_pseudo_features(const PrototypeTable& prototypes,
                                            const Projector& projector, std::size_t capacity,
                                            double noise_scale, std::uint64_t rng_seed);

}  // namespace semevo
