#pragma once

#include <string>
#include <vector>

#include "mgres/coordinator/config.hpp"
#include "mgres/network.hpp"
#include "mgres/restoration/checks.hpp"
#include "mgres/restoration/stage.hpp"

namespace mgres::coordinator {

/// Eq. (28) bound update: max(0, prev + alpha * (delta_f_max - delta_f_meas)).
double update_max_load_step(double prev, double alpha, double delta_f_max, double delta_f_meas);

struct MgStageOutcome {
  restoration::RestorationStage stage;
  sim::FrequencyTrace trace;
  double delta_f_meas = 0.0;       // Hz, fed to the next stage
  double restored_delta_kw = 0.0;  // incremental restored load this stage
  double net_step_kw = 0.0;        // load step seen by the forming unit
  double mls_bound_pu = 0.0;       // max-load-step input carried to the next stage
  milp::SolveStatus solver_status = milp::SolveStatus::NumericError;
  long nodes = 0;
  double wall_ms = 0.0;
};

struct StageResult {
  int stage = 0;
  std::vector<MgStageOutcome> per_mg;  // ordered by MG id
  double total_restored_kw = 0.0;      // cumulative over all MGs
  double delta_kw = 0.0;               // progress made in this stage
};

enum class Termination { Saturated, MaxStages, Infeasible, Instability };
std::string to_string(Termination t);

struct RestorationRun {
  MicrogridPartition partition;
  std::vector<BusBlock> blocks;
  std::vector<StageResult> stage_results;
  Termination termination = Termination::Saturated;
  std::string termination_detail;
  double total_restored_kw = 0.0;
  double wall_s = 0.0;
};

/// True when every microgrid sits at its restorable maximum or the last stage
/// made no progress anywhere.
bool stopping_criterion(const std::vector<StageResult>& stages, const NetworkModel& net,
                        const MicrogridPartition& partition, std::string* reason = nullptr);

/// Drives the per-stage solve -> retain -> simulate -> feed-back loop until
/// restoration saturates or a safeguard fires.
RestorationRun run_sequential_restoration(const NetworkModel& net, const ScenarioConfig& cfg);

struct AlphaSummary {
  double alpha = 0.0;
  int stages_to_completion = 0;  // stages with progress
  std::vector<std::vector<double>> nadirs_by_stage;  // [stage][mg]
  double total_restored_kw = 0.0;
  Termination termination = Termination::Saturated;
};

std::vector<AlphaSummary> compare_alpha_sweep(const NetworkModel& net, const ScenarioConfig& cfg,
                                              const std::vector<double>& alphas);

}  // namespace mgres::coordinator
