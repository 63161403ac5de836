// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "semevo/drift/drift_sim.hpp"
#include "semevo/projector/solvers.hpp"
#include "semevo/toy/trainer.hpp"

namespace semevo {

enum class SourceKind { kSynthetic, kToy, kDump };
enum class SplitKind { kCold, kWarm };
enum class SolverKind { kNone, kAnalytic, kGd, kGdWithQueue, kOracle };
enum class GdInit { kIdentity, kTrained, kRandom };
enum class TestBalance { kBalanced, kUnbalanced };
enum class QueueInit { kPseudo, kEmpty };

const char* to_string(SourceKind v);
const char* to_string(SplitKind v);
const char* to_string(SolverKind v);
const char* to_string(GdInit v);
const char* to_string(TestBalance v);
const char* to_string(QueueInit v);

/// Every knob of one run. Field names match the config-file keys.
struct RunConfig {
  // scenario
  SourceKind source = SourceKind::kSynthetic;
  SplitKind split = SplitKind::kCold;
  std::size_t num_tasks = 10;  // warm start: number of increments after the base task
  std::size_t total_classes = 100;
  Eigen::Index dimension = 32;
  double cluster_separation = 10.0;
  double cluster_spread = 1.0;
  std::size_t train_per_class = 50;
  std::size_t test_per_class = 30;
  std::size_t test_limit_per_class = 0;  // 0 keeps every test sample
  DriftSpec drift{DriftKind::kGeneralAffine, 0.3, 1.0, 0.0, 50.0, 0.0};

  // toy encoder
  Eigen::Index toy_in_dim = 16;
  Eigen::Index toy_hidden = 48;
  std::size_t toy_epochs = 30;
  double toy_lr = 0.05;
  std::size_t toy_batch = 32;
  bool toy_adaptive_lr = true;
  toy::LossWeights loss_weights;
  toy::LossOptions loss_options;

  // external dumps, one file per encoder stage
  std::vector<std::string> dump_paths;

  // engine
  std::size_t queue_capacity = 3000;
  double noise_scale = 0.02;
  std::size_t update_stride = 1;
  std::size_t resolve_stride = 1;
  double ridge = 0.0;
  double min_ridge = 1e-8;
  SingularPolicy singular_policy = SingularPolicy::kFallback;
  double cond_threshold = 1e12;
  SolverKind solver = SolverKind::kAnalytic;
  double gd_lr = 1e-3;
  std::size_t gd_steps = 5;
  GdOptimizer gd_optimizer = GdOptimizer::kPlain;
  GdInit gd_init = GdInit::kIdentity;
  QueueInit gd_queue_init = QueueInit::kPseudo;  // gd_with_queue only
  bool train_projector = true;
  bool affine_projector = false;
  bool predict_before_update = false;

  // evaluation
  TestBalance test_balance = TestBalance::kBalanced;
  double unbalanced_fraction = 0.5;
  bool replay_audit = true;
  double oracle_tol = 1e-12;
  std::size_t oracle_max_steps = 200000;
  std::size_t curve_points = 10;

  std::uint64_t seed = 1;
  std::uint64_t stream_seed = 1;
  std::string output_dir = "out";
};

// Assigns one key; throws kConfig on unknown keys or malformed values.
void set_config_key(RunConfig& config, const std::string& key, const std::string& value);
// Flat "key = value" text; '#' starts a comment.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
// Range checks across fields; throws kConfig.
void validate(const RunConfig& config);

// Every key in a fixed order, one "key = value" line each.
std::string canonical_text(const RunConfig& config);
std::vector<std::string> config_keys();
std::uint64_t fnv1a(const std::string& text);
std::uint64_t config_hash(const RunConfig& config);
// Both hashes ignore output_dir. The group hash also ignores the seeds, so
// rows sharing it are replicates of one setting.
std::uint64_t group_hash(const RunConfig& config);

std::vector<std::size_t> classes_per_task(const RunConfig& config);

}  // namespace semevo
