// SPDX-License-Identifier: Apache-2.0
#include "semevo/harness/sources.hpp"

#include "semevo/harness/feature_dump.hpp"

namespace semevo {

SyntheticScenario synthetic_scenario(const RunConfig& c) {
  SyntheticScenario s;
  s.classes_per_task = classes_per_task(c);
  s.dimension = c.dimension;
  s.cluster_separation = c.cluster_separation;
  s.cluster_spread = c.cluster_spread;
  s.train_per_class = c.train_per_class;
  s.test_per_class = c.test_per_class;
  s.drift_schedule = {c.drift};
  s.seed = c.seed;
  return s;
}

toy::ToyScenario toy_scenario(const RunConfig& c) {
  toy::ToyScenario s;
  s.classes_per_task = classes_per_task(c);
  s.in_dim = c.toy_in_dim;
  s.hidden = c.toy_hidden;
  s.feature_dim = c.dimension;
  s.cluster_separation = c.cluster_separation;
  s.cluster_spread = c.cluster_spread;
  s.train_per_class = c.train_per_class;
  s.test_per_class = c.test_per_class;
  s.train.weights = c.loss_weights;
  s.train.loss = c.loss_options;
  s.train.epochs = c.toy_epochs;
  s.train.base_lr = c.toy_lr;
  s.train.batch_size = c.toy_batch;
  s.train.adaptive_lr = c.toy_adaptive_lr;
  s.seed = c.seed;
  return s;
}

ScenarioData build_source(const RunConfig& config) {
  ScenarioData out;
  switch (config.source) {
    case SourceKind::kSynthetic: {
      SyntheticStream stream = generate_scenario(synthetic_scenario(config));
      out.bank = std::move(stream.bank);
      out.drift_maps = std::move(stream.drift_maps);
      break;
    }
    case SourceKind::kToy: {
      toy::ToyRun run = toy::run_toy_scenario(toy_scenario(config));
      out.bank = std::move(run.bank);
      out.models = std::move(run.models);
      break;
    }
    case SourceKind::kDump: {
      std::vector<std::filesystem::path> paths(config.dump_paths.begin(), config.dump_paths.end());
      out.bank = read_stage_dumps(paths);
      break;
    }
  }
  return out;
}

}  // namespace semevo
