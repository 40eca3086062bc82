#pragma once

#include "mgres/milp/problem.hpp"
#include "mgres/restoration/stage.hpp"

namespace mgres::restoration {

/// Retains the first horizon step of the solve; the remaining lookahead is
/// discarded. Binary values are decoded under the integrality tolerance.
/// Throws std::runtime_error if the solution carries no incumbent.
RestorationStage extract_stage(const milp::MilpSolution& solution, const ModelIndex& index,
                               const StageInputs& inputs, const NetworkModel& net,
                               double int_tol = 1e-6);

}  // namespace mgres::restoration
