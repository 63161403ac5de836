// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "semevo/core/feature_bank.hpp"

namespace semevo {

enum class DriftKind { kIdentity, kRotation, kScaledRotation, kGeneralAffine, kNonlinear };

const char* to_string(DriftKind kind);
DriftKind parse_drift_kind(const std::string& name);

struct DriftSpec {
  DriftKind kind = DriftKind::kIdentity;
  // Rotation angle scale for the rotation kinds; deviation from identity for
  // general_affine and nonlinear.
  double magnitude = 0.0;
  double scale = 1.0;               // scalar factor of scaled_rotation
  double observation_noise = 0.0;   // std of noise added to post-drift features
  double condition_bound = 50.0;    // for general_affine and nonlinear
  double nonlinear_amplitude = 0.0; // epsilon of the sine perturbation
  double nonlinear_frequency = 1.0; // scales the sine's random frequency matrix
};

/// Ground-truth feature-space transform applied at one task boundary.
/// Rows map as z -> z * linear + amplitude * sin(z * frequencies).
class DriftMap {
 public:
  static DriftMap sample(const DriftSpec& spec, Eigen::Index dimension, std::mt19937_64& rng);
  static DriftMap linear_map(Matrix linear);

  DriftKind kind() const { return kind_; }
  bool is_linear() const { return amplitude_ == 0.0; }
  const Matrix& linear() const { return linear_; }
  double condition_number() const;

  Matrix apply(const Eigen::Ref<const Matrix>& rows) const;

 private:
  DriftKind kind_ = DriftKind::kIdentity;
  Matrix linear_;
  Matrix frequencies_;
  double amplitude_ = 0.0;
};

struct SyntheticScenario {
  std::vector<std::size_t> classes_per_task;
  Eigen::Index dimension = 32;
  double cluster_separation = 10.0;  // norm of every class mean
  double cluster_spread = 1.0;       // per-coordinate within-class std
  std::size_t train_per_class = 50;
  std::size_t test_per_class = 30;
  // One spec per boundary (num_tasks - 1 entries), or a single spec reused
  // at every boundary.
  std::vector<DriftSpec> drift_schedule;
  std::uint64_t seed = 0;
};

// Equal split of `total` classes over `tasks`.
std::vector<std::size_t> cold_start_split(std::size_t total, std::size_t tasks);
// Half the classes (rounded so the rest divides evenly) in a base task,
// followed by `incremental_tasks` equal tasks; 100 classes over 20
// increments gives 40 + 20 x 3.
std::vector<std::size_t> warm_start_split(std::size_t total, std::size_t incremental_tasks);

struct SyntheticStream {
  FeatureBank bank;
  std::vector<DriftMap> drift_maps;  // drift_maps[t-2] maps stage t-1 to stage t
  Matrix class_means;                // stage-1 means, one row per class id
};

SyntheticStream generate_scenario(const SyntheticScenario& spec);

struct DriftSimilarity {
  double cosine = 1.0;
  bool degenerate = false;  // one of the drift vectors had zero length
};

// Cosine between estimated drift (estimated - reference) and true drift
// (truth - reference) per class. A zero true drift scores 1, a zero
// estimated drift against a nonzero true drift scores 0; both are flagged.
std::map<ClassId, DriftSimilarity> true_drift_similarity(const PrototypeTable& reference,
                                                         const PrototypeTable& estimated,
                                                         const PrototypeTable& truth);

}  // namespace semevo
