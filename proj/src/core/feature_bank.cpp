// SPDX-License-Identifier: Apache-2.0
#include "semevo/core/feature_bank.hpp"

#include <algorithm>
#include <string>

namespace semevo {

FeatureBank::FeatureBank(std::vector<SampleInfo> samples, std::vector<Matrix> stages)
    : samples_(std::move(samples)), stages_(std::move(stages)) {
  if (stages_.empty()) throw Error(ErrorCode::kStructural, "feature bank without stages");
  dimension_ = stages_.front().cols();
  if (dimension_ == 0) throw Error(ErrorCode::kStructural, "feature dimension is zero");
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    if (stages_[s].rows() != static_cast<Eigen::Index>(samples_.size())) {
      throw Error(ErrorCode::kStructural, "stage " + std::to_string(s + 1) + " has " +
                                              std::to_string(stages_[s].rows()) + " rows for " +
                                              std::to_string(samples_.size()) + " samples");
    }
    if (stages_[s].cols() != dimension_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "stage " + std::to_string(s + 1) + " has dimension " +
                      std::to_string(stages_[s].cols()) + ", expected " +
                      std::to_string(dimension_));
    }
    if (!stages_[s].allFinite()) {
      throw Error(ErrorCode::kNonFinite, "stage " + std::to_string(s + 1));
    }
  }

  std::map<ClassId, TaskId> owner;
  TaskId max_task = 0;
  for (const auto& s : samples_) {
    if (s.task_id == 0) throw Error(ErrorCode::kInconsistent, "task ids are 1-based");
    auto [it, inserted] = owner.emplace(s.class_id, s.task_id);
    if (!inserted && it->second != s.task_id) {
      throw Error(ErrorCode::kInconsistent, "class " + std::to_string(s.class_id) +
                                                " appears in tasks " + std::to_string(it->second) +
                                                " and " + std::to_string(s.task_id));
    }
    max_task = std::max(max_task, s.task_id);
  }
  task_classes_.resize(max_task);
  for (const auto& [c, t] : owner) task_classes_[t - 1].insert(c);
  for (TaskId t = 1; t <= max_task; ++t) {
    if (task_classes_[t - 1].empty()) {
      throw Error(ErrorCode::kInconsistent, "task " + std::to_string(t) + " has no classes");
    }
  }
  if (stages_.size() != max_task) {
    throw Error(ErrorCode::kInconsistent, std::to_string(stages_.size()) + " stages for " +
                                              std::to_string(max_task) + " tasks");
  }
}

const Matrix& FeatureBank::stage(TaskId t) const {
  if (t == 0 || t > stages_.size()) {
    throw Error(ErrorCode::kStructural, "stage " + std::to_string(t) + " out of range");
  }
  return stages_[t - 1];
}

const std::set<ClassId>& FeatureBank::task_classes(TaskId t) const {
  if (t == 0 || t > task_classes_.size()) {
    throw Error(ErrorCode::kStructural, "task " + std::to_string(t) + " out of range");
  }
  return task_classes_[t - 1];
}

std::set<ClassId> FeatureBank::classes_up_to(TaskId t) const {
  std::set<ClassId> out;
  for (TaskId k = 1; k <= t; ++k) {
    const auto& cs = task_classes(k);
    out.insert(cs.begin(), cs.end());
  }
  return out;
}

std::set<ClassId> FeatureBank::all_classes() const { return classes_up_to(num_tasks()); }

std::vector<std::size_t> FeatureBank::indices(TaskId task, Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].task_id == task && samples_[i].split == split) out.push_back(i);
  }
  return out;
}

TaskDataset FeatureBank::task_dataset(TaskId t, TaskId stage_id) const {
  const Matrix& features = stage(stage_id);
  TaskDataset ds;
  ds.class_set = task_classes(t);
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].task_id != t) continue;
    FeatureRecord r{features.row(static_cast<Eigen::Index>(i)).transpose(), samples_[i].class_id,
                    t};
    (samples_[i].split == Split::kTrain ? ds.records : ds.test_records).push_back(std::move(r));
  }
  return ds;
}

TaskSequence FeatureBank::task_sequence() const {
  std::vector<TaskDataset> tasks;
  for (TaskId t = 1; t <= num_tasks(); ++t) tasks.push_back(task_dataset(t, t));
  return TaskSequence(std::move(tasks));
}

FeatureBank FeatureBank::quantized() const {
  std::vector<Matrix> stages;
  stages.reserve(stages_.size());
  for (const auto& s : stages_) stages.push_back(s.cast<float>().cast<double>());
  return FeatureBank(samples_, std::move(stages));
}

}  // namespace semevo
