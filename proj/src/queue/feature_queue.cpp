// SPDX-License-Identifier: Apache-2.0
#include "semevo/queue/feature_queue.hpp"

#include <string>

namespace semevo {

FeatureQueue::FeatureQueue(Eigen::Index dimension, std::size_t capacity)
    : storage_(static_cast<Eigen::Index>(capacity), dimension), capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kConfig, "queue capacity must be positive");
  if (dimension <= 0) throw Error(ErrorCode::kStructural, "queue dimension must be positive");
}

std::size_t FeatureQueue::push(const Eigen::Ref<const Matrix>& rows) {
  if (rows.cols() != dimension()) {
    throw Error(ErrorCode::kStructural, "pushing rows of dimension " +
                                            std::to_string(rows.cols()) + " into a queue of dimension " +
                                            std::to_string(dimension()));
  }
  std::size_t dropped = 0;
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    if (size_ == capacity_) {
      head_ = (head_ + 1) % capacity_;
      --size_;
      ++dropped;
    }
    storage_.row(static_cast<Eigen::Index>(slot(size_))) = rows.row(r);
    ++size_;
  }
  return dropped;
}

RowVector FeatureQueue::row(std::size_t i) const {
  if (i >= size_) throw Error(ErrorCode::kStructural, "queue row out of range");
  return storage_.row(static_cast<Eigen::Index>(slot(i)));
}

Matrix FeatureQueue::matrix() const {
  Matrix out(static_cast<Eigen::Index>(size_), dimension());
  for (std::size_t i = 0; i < size_; ++i) {
    out.row(static_cast<Eigen::Index>(i)) = storage_.row(static_cast<Eigen::Index>(slot(i)));
  }
  return out;
}

LeastSquaresMoments moments_from_rows(const Eigen::Ref<const Matrix>& old_rows,
                                      const Eigen::Ref<const Matrix>& new_rows, bool affine) {
  if (old_rows.rows() != new_rows.rows() || old_rows.cols() != new_rows.cols()) {
    throw Error(ErrorCode::kStructural, "paired rows must share shape");
  }
  const Eigen::Index d = old_rows.cols();
  LeastSquaresMoments m;
  m.affine = affine;
  m.count = static_cast<double>(old_rows.rows());
  m.target_sq = new_rows.squaredNorm();
  if (!affine) {
    m.gram = old_rows.transpose() * old_rows;
    m.cross = old_rows.transpose() * new_rows;
    return m;
  }
  m.gram.resize(d + 1, d + 1);
  m.gram.topLeftCorner(d, d) = old_rows.transpose() * old_rows;
  const RowVector old_sum = old_rows.colwise().sum();
  m.gram.topRightCorner(d, 1) = old_sum.transpose();
  m.gram.bottomLeftCorner(1, d) = old_sum;
  m.gram(d, d) = m.count;
  m.cross.resize(d + 1, d);
  m.cross.topRows(d) = old_rows.transpose() * new_rows;
  m.cross.bottomRows(1) = new_rows.colwise().sum();
  return m;
}

QueuePair::QueuePair(Eigen::Index dimension, std::size_t capacity)
    : old_(dimension, capacity),
      new_(dimension, capacity),
      gram_(Matrix::Zero(dimension, dimension)),
      cross_(Matrix::Zero(dimension, dimension)),
      old_sum_(RowVector::Zero(dimension)),
      new_sum_(RowVector::Zero(dimension)) {}

void QueuePair::add_row(const Eigen::Ref<const RowVector>& o, const Eigen::Ref<const RowVector>& n,
                        double sign) {
  gram_.noalias() += sign * o.transpose() * o;
  cross_.noalias() += sign * o.transpose() * n;
  old_sum_ += sign * o;
  new_sum_ += sign * n;
  target_sq_ += sign * n.squaredNorm();
}

void QueuePair::push(const Eigen::Ref<const Matrix>& old_rows,
                     const Eigen::Ref<const Matrix>& new_rows) {
  if (old_rows.rows() != new_rows.rows()) {
    throw Error(ErrorCode::kStructural, "paired push with " + std::to_string(old_rows.rows()) +
                                            " old rows and " + std::to_string(new_rows.rows()) +
                                            " new rows");
  }
  if (old_rows.cols() != dimension() || new_rows.cols() != dimension()) {
    throw Error(ErrorCode::kStructural, "paired push with wrong feature dimension");
  }
  if (!old_rows.allFinite() || !new_rows.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "paired push");
  }
  const auto cap = static_cast<Eigen::Index>(capacity());
  if (old_rows.rows() >= cap) {
    // Everything currently queued is evicted; only the tail survives.
    const Eigen::Index start = old_rows.rows() - cap;
    old_.head_ = old_.size_ = 0;
    new_.head_ = new_.size_ = 0;
    old_.push(old_rows.bottomRows(cap));
    new_.push(new_rows.bottomRows(cap));
    evictions_since_refresh_ += static_cast<std::size_t>(start) + capacity();
    refresh_moments();
    return;
  }
  for (Eigen::Index r = 0; r < old_rows.rows(); ++r) {
    if (old_.full()) {
      const auto s = static_cast<Eigen::Index>(old_.slot(0));
      add_row(old_.storage_.row(s), new_.storage_.row(s), -1.0);
      ++evictions_since_refresh_;
    }
    old_.push(old_rows.row(r));
    new_.push(new_rows.row(r));
    add_row(old_rows.row(r), new_rows.row(r), 1.0);
  }
  if (evictions_since_refresh_ >= capacity()) refresh_moments();
}

void QueuePair::refresh_moments() {
  const Matrix o = old_.matrix();
  const Matrix n = new_.matrix();
  gram_.noalias() = o.transpose() * o;
  cross_.noalias() = o.transpose() * n;
  old_sum_ = o.colwise().sum();
  new_sum_ = n.colwise().sum();
  target_sq_ = n.squaredNorm();
  evictions_since_refresh_ = 0;
}

LeastSquaresMoments QueuePair::moments(bool affine) const {
  const Eigen::Index d = dimension();
  LeastSquaresMoments m;
  m.affine = affine;
  m.count = static_cast<double>(size());
  m.target_sq = target_sq_;
  if (!affine) {
    m.gram = gram_;
    m.cross = cross_;
    return m;
  }
  m.gram.resize(d + 1, d + 1);
  m.gram.topLeftCorner(d, d) = gram_;
  m.gram.topRightCorner(d, 1) = old_sum_.transpose();
  m.gram.bottomLeftCorner(1, d) = old_sum_;
  m.gram(d, d) = m.count;
  m.cross.resize(d + 1, d);
  m.cross.topRows(d) = cross_;
  m.cross.bottomRows(1) = new_sum_;
  return m;
}

}  // namespace semevo
