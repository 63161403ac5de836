// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "semevo/harness/config.hpp"

namespace semevo {

struct ScenarioData {
  FeatureBank bank;
  std::vector<DriftMap> drift_maps;  // synthetic source only
  std::vector<toy::ToyModel> models;  // toy source only
};

// Builds the feature bank for the configured source.
ScenarioData build_source(const RunConfig& config);

SyntheticScenario synthetic_scenario(const RunConfig& config);
toy::ToyScenario toy_scenario(const RunConfig& config);

}  // namespace semevo
