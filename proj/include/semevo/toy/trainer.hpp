// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "semevo/core/feature_bank.hpp"
#include "semevo/toy/losses.hpp"

namespace semevo::toy {

struct TrainOptions {
  LossWeights weights;
  LossOptions loss;
  std::size_t epochs = 30;
  double base_lr = 0.05;
  std::size_t batch_size = 32;
  // Scale the step by |new classes| / |old classes| from the second task on.
  bool adaptive_lr = true;
  std::uint64_t seed = 0;
};

struct TrainReport {
  double learning_rate = 0.0;
  std::size_t steps = 0;
  double last_loss = 0.0;
  double train_accuracy = 0.0;  // argmax of the head over the task's training rows
};

/// Training rows of one task; labels are class ids from `classes`.
struct ToyTask {
  Matrix inputs;
  std::vector<ClassId> labels;
  std::vector<ClassId> classes;
};

// Extends the head with the task's classes and runs minibatch SGD on the
// composite loss. `old_model` is the snapshot after the previous task (null
// for the first task); its head width defines the old classes.
ToyModel train_task(ToyModel model, const ToyModel* old_model, const ToyTask& task,
                    const TrainOptions& options, TrainReport* report = nullptr);

struct ToyScenario {
  std::vector<std::size_t> classes_per_task;
  Eigen::Index in_dim = 16;
  Eigen::Index hidden = 48;
  Eigen::Index feature_dim = 16;
  double cluster_separation = 6.0;
  double cluster_spread = 1.0;
  std::size_t train_per_class = 40;
  std::size_t test_per_class = 20;
  TrainOptions train;
  std::uint64_t seed = 0;
};

struct ToyRun {
  FeatureBank bank;               // stage t = features of the model after task t
  std::vector<ToyModel> models;   // one snapshot per task
  std::vector<TrainReport> reports;
};

ToyRun run_toy_scenario(const ToyScenario& spec);

}  // namespace semevo::toy
