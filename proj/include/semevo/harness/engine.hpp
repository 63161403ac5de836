// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "semevo/harness/config.hpp"

namespace semevo {

// Accumulated seconds per phase of the per-sample loop.
struct PhaseTiming {
  double forward = 0;
  double queue_update = 0;
  double solve = 0;    // includes prototype evolution
  double predict = 0;
  std::size_t samples = 0;

  double total() const { return forward + queue_update + solve + predict; }
  double per_sample(double seconds) const {
    return samples ? seconds / static_cast<double>(samples) : 0.0;
  }
  PhaseTiming& operator+=(const PhaseTiming& o);
};

struct CurvePoint {
  std::size_t arrivals = 0;
  double per_class = 0;  // arrivals divided by the number of seen classes
  double accuracy = 0;   // running accuracy over the streamed samples so far
};

struct TaskMetrics {
  TaskId task = 0;
  std::size_t seen_classes = 0;
  std::size_t streamed = 0;
  std::size_t evaluated = 0;  // streamed plus held-out samples
  std::size_t correct = 0;
  double accuracy = 0;
  std::size_t solves = 0;
  double residual = 0;        // of the final projector on the final queue
  double gram_condition = 0;
  bool ridge_applied = false;
  std::map<ClassId, DriftSimilarity> drift;  // old classes, tasks >= 2
  std::vector<CurvePoint> curve;
  std::size_t replay_mismatches = 0;
};

struct RunResult {
  RunConfig config;
  std::string run_id;
  std::uint64_t config_hash = 0;
  std::uint64_t group_hash = 0;
  std::vector<TaskMetrics> tasks;
  std::map<ClassId, double> class_accuracy;  // after the final task
  double last_accuracy = 0;
  double old_accuracy = 0;
  double new_accuracy = 0;
  double select_accuracy = 0;
  double excluded_accuracy = 0;
  double mean_drift_similarity = 0;
  std::set<ClassId> selected_classes;
  PhaseTiming timing;  // streamed samples of tasks >= 2
  bool replay_checked = false;
  bool replay_ok = true;
};

std::string make_run_id(const RunConfig& config);

// Classes that stay in the stream under the unbalanced regime; drawn from
// the seed alone so balanced and unbalanced runs split the same way.
std::set<ClassId> select_classes(const std::set<ClassId>& all, double fraction, std::uint64_t seed);

/// Runs every task of the bank: fresh prototypes, queue initialization, and
/// the per-sample update, solve, evolve and predict loop.
RunResult run_engine(const FeatureBank& bank, const RunConfig& config);

}  // namespace semevo
