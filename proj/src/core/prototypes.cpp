// SPDX-License-Identifier: Apache-2.0
#include "semevo/core/prototypes.hpp"

#include <algorithm>
#include <string>

namespace semevo {

PrototypeTable::PrototypeTable(Eigen::Index dimension, std::map<ClassId, PrototypeEntry> entries)
    : dimension_(dimension), entries_(std::move(entries)) {
  for (const auto& [id, entry] : entries_) {
    if (entry.prototype.size() != dimension_) {
      throw Error(ErrorCode::kStructural, "prototype of class " + std::to_string(id) +
                                              " has dimension " +
                                              std::to_string(entry.prototype.size()) +
                                              ", table dimension is " + std::to_string(dimension_));
    }
    if (!entry.prototype.allFinite()) {
      throw Error(ErrorCode::kNonFinite, "prototype of class " + std::to_string(id));
    }
  }
}

const PrototypeEntry& PrototypeTable::at(ClassId id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kMissingClass, "class " + std::to_string(id) + " not in table");
  }
  return it->second;
}

std::set<ClassId> PrototypeTable::class_ids() const {
  std::set<ClassId> ids;
  for (const auto& [id, entry] : entries_) ids.insert(id);
  return ids;
}

PrototypeTable PrototypeTable::merged(const PrototypeTable& other) const {
  if (empty()) return other;
  if (other.empty()) return *this;
  if (other.dimension_ != dimension_) {
    throw Error(ErrorCode::kStructural, "cannot merge tables of different dimension");
  }
  auto entries = entries_;
  for (const auto& [id, entry] : other.entries_) {
    if (!entries.emplace(id, entry).second) {
      throw Error(ErrorCode::kStructural, "class " + std::to_string(id) + " in both tables");
    }
  }
  return PrototypeTable(dimension_, std::move(entries));
}

PrototypeTable PrototypeTable::subset(const std::set<ClassId>& ids) const {
  std::map<ClassId, PrototypeEntry> entries;
  for (ClassId id : ids) entries.emplace(id, at(id));
  return PrototypeTable(dimension_, std::move(entries));
}

PrototypeTable compute_prototypes(std::span<const FeatureRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kStructural, "cannot compute prototypes of an empty record set");
  }
  const Eigen::Index d = records.front().vector.size();
  std::map<ClassId, std::pair<Vector, std::size_t>> sums;
  TaskId task = 0;
  for (const auto& r : records) {
    if (r.vector.size() != d) {
      throw Error(ErrorCode::kStructural, "record of class " + std::to_string(r.class_id) +
                                              " has dimension " + std::to_string(r.vector.size()) +
                                              ", expected " + std::to_string(d));
    }
    auto [it, inserted] = sums.try_emplace(r.class_id, Vector::Zero(d), 0);
    it->second.first += r.vector;
    ++it->second.second;
    task = std::max(task, r.task_id);
  }
  std::map<ClassId, PrototypeEntry> entries;
  for (auto& [id, acc] : sums) {
    entries.emplace(id, PrototypeEntry{acc.first / static_cast<double>(acc.second), task});
  }
  return PrototypeTable(d, std::move(entries));
}

double cosine_similarity(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kStructural, "cosine of vectors with different dimension");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "cosine similarity with a zero-norm vector");
  }
  return a.dot(b) / (na * nb);
}

NcmIndex::NcmIndex(const PrototypeTable& table) {
  if (table.empty()) {
    throw Error(ErrorCode::kStructural, "nearest-class-mean over an empty prototype table");
  }
  unit_rows_.resize(static_cast<Eigen::Index>(table.size()), table.dimension());
  Eigen::Index row = 0;
  for (const auto& [id, entry] : table.entries()) {
    const double norm = entry.prototype.norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kDegenerateInput,
                  "prototype of class " + std::to_string(id) + " has zero norm");
    }
    unit_rows_.row(row++) = entry.prototype.transpose() / norm;
    ids_.push_back(id);
  }
}

ClassId NcmIndex::predict(const Eigen::Ref<const Vector>& feature) const {
  if (feature.size() != unit_rows_.cols()) {
    throw Error(ErrorCode::kStructural, "feature dimension " + std::to_string(feature.size()) +
                                            " does not match prototypes (" +
                                            std::to_string(unit_rows_.cols()) + ")");
  }
  if (feature.norm() == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "zero-norm feature");
  }
  // The feature norm is a common positive factor and does not change the argmax.
  const Vector scores = unit_rows_ * feature;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return ids_[static_cast<std::size_t>(best)];
}

ClassId ncm_predict(const Eigen::Ref<const Vector>& feature, const PrototypeTable& table) {
  return NcmIndex(table).predict(feature);
}

TaskSequence::TaskSequence(std::vector<TaskDataset> tasks) : tasks_(std::move(tasks)) {
  std::map<ClassId, std::size_t> owner;
  for (std::size_t t = 0; t < tasks_.size(); ++t) {
    for (ClassId c : tasks_[t].class_set) {
      auto [it, inserted] = owner.emplace(c, t + 1);
      if (!inserted) {
        throw Error(ErrorCode::kInconsistent, "class " + std::to_string(c) +
                                                  " appears in tasks " +
                                                  std::to_string(it->second) + " and " +
                                                  std::to_string(t + 1));
      }
    }
    for (const auto* split : {&tasks_[t].records, &tasks_[t].test_records}) {
      for (const auto& r : *split) {
        if (tasks_[t].class_set.count(r.class_id) == 0) {
          throw Error(ErrorCode::kInconsistent, "record of class " + std::to_string(r.class_id) +
                                                    " is not in the class set of task " +
                                                    std::to_string(t + 1));
        }
      }
    }
  }
}

const TaskDataset& TaskSequence::task(TaskId t) const {
  if (t == 0 || t > tasks_.size()) {
    throw Error(ErrorCode::kStructural, "task " + std::to_string(t) + " out of range");
  }
  return tasks_[t - 1];
}

}  // namespace semevo
