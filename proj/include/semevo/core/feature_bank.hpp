// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "semevo/core/prototypes.hpp"

namespace semevo {

enum class Split : std::uint8_t { kTrain = 0, kTest = 1 };

struct SampleInfo {
  ClassId class_id = 0;
  TaskId task_id = 0;  // task that introduces the class
  Split split = Split::kTrain;

  bool operator==(const SampleInfo&) const = default;
};

/// Every sample of a task sequence as seen by each encoder stage.
///
/// stage(t) holds the features extracted by the encoder after learning task
/// t; row i of every stage is the same underlying input, so rows of two
/// stages are paired observations. Task ids are 1-based and contiguous, and
/// every class belongs to exactly one task.
class FeatureBank {
 public:
  FeatureBank() = default;
  FeatureBank(std::vector<SampleInfo> samples, std::vector<Matrix> stages);

  std::size_t num_stages() const { return stages_.size(); }
  TaskId num_tasks() const { return static_cast<TaskId>(task_classes_.size()); }
  Eigen::Index dimension() const { return dimension_; }
  std::size_t num_samples() const { return samples_.size(); }

  const std::vector<SampleInfo>& samples() const { return samples_; }
  const Matrix& stage(TaskId t) const;
  const std::set<ClassId>& task_classes(TaskId t) const;
  std::set<ClassId> classes_up_to(TaskId t) const;
  std::set<ClassId> all_classes() const;

  // Sample indices of one task and split, in storage order.
  std::vector<std::size_t> indices(TaskId task, Split split) const;

  // Records of task t (train and test) as seen by encoder stage `stage`.
  TaskDataset task_dataset(TaskId t, TaskId stage) const;
  TaskSequence task_sequence() const;

  // Copy with every feature rounded to single precision.
  FeatureBank quantized() const;

 private:
  std::vector<SampleInfo> samples_;
  std::vector<Matrix> stages_;
  std::vector<std::set<ClassId>> task_classes_;
  Eigen::Index dimension_ = 0;
};

}  // namespace semevo
