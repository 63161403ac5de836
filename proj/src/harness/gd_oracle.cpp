// SPDX-License-Identifier: Apache-2.0
#include "semevo/harness/gd_oracle.hpp"

namespace semevo {

RunResult run_gd_oracle(const FeatureBank& bank, const RunConfig& config) {
  RunConfig cfg = config;
  cfg.solver = SolverKind::kOracle;
  return run_engine(bank, cfg);
}

OracleComparison compare_with_oracle(const FeatureBank& bank, const RunConfig& config) {
  RunConfig online = config;
  online.solver = SolverKind::kAnalytic;
  return {run_gd_oracle(bank, config), run_engine(bank, online)};
}

}  // namespace semevo
