// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <numeric>
#include <string>

#include "semevo/drift/drift_sim.hpp"

namespace semevo {

std::vector<std::size_t> cold_start_split(std::size_t total, std::size_t tasks) {
  if (tasks == 0 || total % tasks != 0) {
    throw Error(ErrorCode::kConfig, std::to_string(total) + " classes cannot be split equally over " +
                                        std::to_string(tasks) + " tasks");
  }
  return std::vector<std::size_t>(tasks, total / tasks);
}

std::vector<std::size_t> warm_start_split(std::size_t total, std::size_t incremental_tasks) {
  if (incremental_tasks == 0) throw Error(ErrorCode::kConfig, "warm start needs increments");
  const std::size_t rest = total - total / 2;
  const std::size_t per_task = (rest + incremental_tasks - 1) / incremental_tasks;
  if (per_task * incremental_tasks >= total) {
    throw Error(ErrorCode::kConfig, "too many incremental tasks for " + std::to_string(total) +
                                        " classes");
  }
  std::vector<std::size_t> split{total - per_task * incremental_tasks};
  split.insert(split.end(), incremental_tasks, per_task);
  return split;
}

SyntheticStream generate_scenario(const SyntheticScenario& spec) {
  const std::size_t num_tasks = spec.classes_per_task.size();
  if (num_tasks == 0) throw Error(ErrorCode::kConfig, "scenario without tasks");
  for (std::size_t n : spec.classes_per_task) {
    if (n == 0) throw Error(ErrorCode::kConfig, "every task needs at least one class");
  }
  if (spec.dimension <= 0) throw Error(ErrorCode::kConfig, "dimension must be positive");
  if (spec.train_per_class == 0 || spec.test_per_class == 0) {
    throw Error(ErrorCode::kConfig, "need at least one train and one test sample per class");
  }
  const std::size_t boundaries = num_tasks - 1;
  if (boundaries > 0 && spec.drift_schedule.size() != 1 &&
      spec.drift_schedule.size() != boundaries) {
    throw Error(ErrorCode::kConfig, "drift schedule has " +
                                        std::to_string(spec.drift_schedule.size()) +
                                        " entries for " + std::to_string(boundaries) +
                                        " task boundaries");
  }
  const std::size_t total_classes =
      std::accumulate(spec.classes_per_task.begin(), spec.classes_per_task.end(), std::size_t{0});
  const Eigen::Index d = spec.dimension;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix means(static_cast<Eigen::Index>(total_classes), d);
  for (Eigen::Index c = 0; c < means.rows(); ++c) {
    for (Eigen::Index j = 0; j < d; ++j) means(c, j) = normal(rng);
    means.row(c) *= spec.cluster_separation / means.row(c).norm();
  }

  std::vector<SampleInfo> samples;
  const std::size_t per_class = spec.train_per_class + spec.test_per_class;
  samples.reserve(total_classes * per_class);
  ClassId next_class = 0;
  for (std::size_t t = 0; t < num_tasks; ++t) {
    for (std::size_t k = 0; k < spec.classes_per_task[t]; ++k, ++next_class) {
      for (std::size_t i = 0; i < per_class; ++i) {
        samples.push_back({next_class, static_cast<TaskId>(t + 1),
                           i < spec.train_per_class ? Split::kTrain : Split::kTest});
      }
    }
  }

  Matrix clean(static_cast<Eigen::Index>(samples.size()), d);
  for (Eigen::Index i = 0; i < clean.rows(); ++i) {
    const auto c = static_cast<Eigen::Index>(samples[static_cast<std::size_t>(i)].class_id);
    for (Eigen::Index j = 0; j < d; ++j) {
      clean(i, j) = means(c, j) + spec.cluster_spread * normal(rng);
    }
  }

  SyntheticStream out;
  std::vector<Matrix> stages{clean};
  for (std::size_t b = 0; b < boundaries; ++b) {
    const DriftSpec& ds = spec.drift_schedule.size() == 1 ? spec.drift_schedule[0]
                                                          : spec.drift_schedule[b];
    out.drift_maps.push_back(DriftMap::sample(ds, d, rng));
    clean = out.drift_maps.back().apply(clean);
    Matrix observed = clean;
    if (ds.observation_noise > 0) {
      for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < observed.rows(); ++i) {
          observed(i, j) += ds.observation_noise * normal(rng);
        }
      }
    }
    stages.push_back(std::move(observed));
  }
  out.bank = FeatureBank(std::move(samples), std::move(stages));
  out.class_means = std::move(means);
  return out;
}

std::map<ClassId, DriftSimilarity> true_drift_similarity(const PrototypeTable& reference,
                                                         const PrototypeTable& estimated,
                                                         const PrototypeTable& truth) {
  if (estimated.class_ids() != truth.class_ids()) {
    throw Error(ErrorCode::kStructural, "estimated and true prototype tables differ in classes");
  }
  std::map<ClassId, DriftSimilarity> out;
  for (const auto& [id, entry] : truth.entries()) {
    const Vector& ref = reference.at(id).prototype;
    const Vector true_drift = entry.prototype - ref;
    const Vector est_drift = estimated.at(id).prototype - ref;
    const double floor = 1e-12 * std::max(1.0, ref.norm());
    DriftSimilarity s;
    if (true_drift.norm() <= floor) {
      s = {1.0, true};
    } else if (est_drift.norm() <= floor) {
      s = {0.0, true};
    } else {
      s.cosine = true_drift.dot(est_drift) / (true_drift.norm() * est_drift.norm());
    }
    out.emplace(id, s);
  }
  return out;
}

}  // namespace semevo
