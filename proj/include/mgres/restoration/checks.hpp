#pragma once

#include <string>
#include <vector>

#include "mgres/restoration/stage.hpp"

namespace mgres::restoration {

struct CheckResult {
  bool ok = true;
  std::vector<std::string> violations;
  double max_residual = 0.0;  // power-balance check only
};

/// Energized buses and lines of the stage's microgrid must form a single
/// connected, acyclic component.
CheckResult check_radiality(const RestorationStage& stage, const NetworkModel& net);

/// Per-bus per-phase residual of the decoded flows against generation and
/// restored load, compared to tol (pu).
CheckResult check_power_balance(const RestorationStage& stage, const NetworkModel& net,
                                double tol = 1e-6);

}  // namespace mgres::restoration
