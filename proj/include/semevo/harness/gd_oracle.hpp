// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "semevo/harness/engine.hpp"

namespace semevo {

struct OracleComparison {
  RunResult oracle;    // offline: projector fitted on the whole test stream first
  RunResult analytic;  // the online engine on the same stream
};

// Per task, gradient descent to convergence on every paired test feature of
// the stream, then evaluation with that fixed projector. Not an online
// method; it needs the full stream in advance.
RunResult run_gd_oracle(const FeatureBank& bank, const RunConfig& config);

OracleComparison compare_with_oracle(const FeatureBank& bank, const RunConfig& config);

}  // namespace semevo
