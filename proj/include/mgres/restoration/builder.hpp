#pragma once

#include "mgres/milp/problem.hpp"
#include "mgres/restoration/stage.hpp"

namespace mgres::restoration {

struct BuilderConfig {
  double big_m = 0.0;        // 0 -> auto: 10 * (v_max_sq - v_min_sq) per line
  bool fix_previous = true;  // pin previously energized elements to 1
};

/// Assembles the rolling-horizon restoration MILP for one microgrid: load
/// maximization objective, per-phase DistFlow balance and limits, big-M
/// voltage coupling, connectivity/no-trip links and switch sequencing. The
/// frequency (max-load-step) constraints are added by
/// add_frequency_constraints.
std::pair<milp::MilpProblem, ModelIndex> build_stage_problem(const NetworkModel& net,
                                                             const StageInputs& inputs,
                                                             const BuilderConfig& cfg = {});

/// Adds the max-load-step bound chain and the forming-DG ramp envelope.
/// At stage 1 the bound chain is inactive (no prior nadir) and the step is
/// limited by generator capacity alone. Throws on alpha < 0 or
/// delta_f_max <= 0.
void add_frequency_constraints(milp::MilpProblem& problem, const ModelIndex& index,
                               const NetworkModel& net, const StageInputs& inputs);

}  // namespace mgres::restoration
