// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <span>
#include <vector>

#include "semevo/core/types.hpp"

namespace semevo {

struct FeatureRecord {
  Vector vector;
  ClassId class_id = 0;
  TaskId task_id = 0;
};

struct PrototypeEntry {
  Vector prototype;
  TaskId aligned_task = 0;
};

/// Class prototypes keyed by class id. Immutable once built; operations that
/// change prototypes return a new table.
class PrototypeTable {
 public:
  PrototypeTable() = default;
  PrototypeTable(Eigen::Index dimension, std::map<ClassId, PrototypeEntry> entries);

  Eigen::Index dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(ClassId id) const { return entries_.count(id) != 0; }

  const PrototypeEntry& at(ClassId id) const;
  const std::map<ClassId, PrototypeEntry>& entries() const { return entries_; }
  std::set<ClassId> class_ids() const;

  // Union of two tables with disjoint keys.
  PrototypeTable merged(const PrototypeTable& other) const;
  PrototypeTable subset(const std::set<ClassId>& ids) const;

 private:
  Eigen::Index dimension_ = 0;
  std::map<ClassId, PrototypeEntry> entries_;
};

// Per-class arithmetic mean of raw (unnormalized) feature vectors. The
// aligned task is the largest task id among the records.
PrototypeTable compute_prototypes(std::span<const FeatureRecord> records);

double cosine_similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Nearest-class-mean lookup by cosine similarity. Prototypes are normalized
/// once at construction; ties go to the smallest class id.
class NcmIndex {
 public:
  explicit NcmIndex(const PrototypeTable& table);

  ClassId predict(const Eigen::Ref<const Vector>& feature) const;
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<ClassId> ids_;  // ascending
  Matrix unit_rows_;          // one normalized prototype per row
};

ClassId ncm_predict(const Eigen::Ref<const Vector>& feature, const PrototypeTable& table);

struct TaskDataset {
  std::vector<FeatureRecord> records;       // training split
  std::vector<FeatureRecord> test_records;  // test split
  std::set<ClassId> class_set;
};

/// Ordered tasks whose class sets are pairwise disjoint (checked on
/// construction).
class TaskSequence {
 public:
  explicit TaskSequence(std::vector<TaskDataset> tasks);

  std::size_t size() const { return tasks_.size(); }
  const TaskDataset& task(TaskId t) const;  // 1-based
  const std::vector<TaskDataset>& tasks() const { return tasks_; }

 private:
  std::vector<TaskDataset> tasks_;
};

}  // namespace semevo
