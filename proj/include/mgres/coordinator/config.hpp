#pragma once

#include <map>

#include "mgres/milp/solver.hpp"
#include "mgres/sim/inverter.hpp"

namespace mgres::coordinator {

struct ScenarioConfig {
  int horizon = 4;           // rolling horizon length T
  double alpha = 0.1;        // max-load-step gain, pu per Hz
  double delta_f_max = 0.5;  // allowable frequency drop, Hz
  double f0_hz = 60.0;
  double big_m = 0.0;        // 0 -> auto per line
  bool freq_constraints = true;
  int max_stages = 20;
  bool start_energized = false;  // pre-energize every non-faulted element
  bool parallel_mgs = true;

  sim::SimOptions sim;
  sim::InverterParams inverter;                       // defaults for every MG
  std::map<int, sim::InverterParams> inverter_by_mg;  // overrides by MG id
  milp::MilpOptions solver;

  double f_min() const { return f0_hz - delta_f_max; }  // Eq-identity: single source
  const sim::InverterParams& params_for(int mg_id) const {
    auto it = inverter_by_mg.find(mg_id);
    return it == inverter_by_mg.end() ? inverter : it->second;
  }
  void validate() const;  // throws std::invalid_argument
};

}  // namespace mgres::coordinator
