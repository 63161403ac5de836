// SPDX-License-Identifier: Apache-2.0
#include <random>
#include <vector>

#include "semevo/queue/feature_queue.hpp"

namespace semevo {

PseudoFeatureInit init_with_pseudo_features(const PrototypeTable& prototypes,
                                            const Projector& projector, std::size_t capacity,
                                            double noise_scale, std::uint64_t rng_seed) {
  if (prototypes.empty()) {
    throw Error(ErrorCode::kStructural,
                "pseudo-features need at least one old class (skip evolution on the first task)");
  }
  if (noise_scale < 0.0) throw Error(ErrorCode::kConfig, "noise scale must be non-negative");
  const Eigen::Index d = prototypes.dimension();
  if (projector.dimension() != d) {
    throw Error(ErrorCode::kStructural, "projector dimension does not match prototypes");
  }

  std::vector<const Vector*> classes;
  for (const auto& [id, entry] : prototypes.entries()) classes.push_back(&entry.prototype);

  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, classes.size() - 1);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix old_rows(static_cast<Eigen::Index>(capacity), d);
  std::vector<bool> used(classes.size(), false);
  Eigen::Index distinct = 0;
  for (Eigen::Index r = 0; r < old_rows.rows(); ++r) {
    const std::size_t c = pick(rng);
    if (!used[c]) {
      used[c] = true;
      ++distinct;
    }
    const Vector& p = *classes[c];
    for (Eigen::Index j = 0; j < d; ++j) old_rows(r, j) = p[j] + noise_scale * normal(rng);
  }
  const Matrix new_rows = projector.apply_rows(old_rows);

  PseudoFeatureInit out{QueuePair(d, capacity), false};
  out.queues.push(old_rows, new_rows);
  out.rank_deficient = static_cast<Eigen::Index>(capacity) < d || (noise_scale == 0.0 && distinct < d);
  return out;
}

}  // namespace semevo
