#pragma once

#include "mgres/milp/problem.hpp"
#include "mgres/milp/simplex.hpp"

namespace mgres::milp {

struct MilpOptions {
  double gap_tol = 1e-6;       // relative bound gap
  double int_tol = 1e-6;       // integrality tolerance
  long node_limit = 200'000;
  double time_limit_s = 1e30;  // wall clock; hitting it reports node-limit status
  LpOptions lp;
  bool warm_start = true;
};

/// Branch and bound: best-bound node selection, most-fractional branching,
/// lowest-id branch tie-break, FIFO among equal bounds. Deterministic.
MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opts = {});

/// Test-scale oracle: enumerates every binary assignment (<= 20 binaries),
/// solving the continuous LP for each. Exact up to LP tolerance.
MilpSolution brute_force_milp(const MilpProblem& p, const LpOptions& lp = {});

}  // namespace mgres::milp
