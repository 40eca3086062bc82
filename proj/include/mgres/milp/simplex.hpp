#pragma once

#include <cstdint>
#include <vector>

#include "mgres/milp/problem.hpp"

namespace mgres::milp {

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-9;
  long max_iterations = 2'000'000;
  int refactor_interval = 100;
  int stall_limit = 200;  // degenerate pivots before switching to Bland's rule
};

/// Basis snapshot for warm starts (column indices include logicals >= n).
struct LpBasis {
  std::vector<int> basic;          // one column per row
  std::vector<std::uint8_t> vstat; // per column: 0 at-lower, 1 at-upper, 2 basic, 3 free-at-zero
};

struct LpResult {
  SolveStatus status = SolveStatus::NumericError;
  std::vector<double> x;             // structural values
  double objective = 0.0;            // in the problem's own sense
  std::vector<double> duals;         // row duals (maximization convention)
  std::vector<double> reduced_costs; // structural reduced costs (maximization convention)
  LpBasis basis;
  long iterations = 0;
};

/// Solves the LP relaxation of p (integrality dropped). Deterministic:
/// largest-reduced-cost pricing with lowest-index ties, switching to Bland's
/// rule after a degenerate stall.
LpResult solve_lp(const MilpProblem& p, const LpOptions& opts = {});

/// Relaxation solve with per-variable bound overrides (used by branch and
/// bound) and an optional warm-start basis.
LpResult solve_lp_bounded(const MilpProblem& p, const std::vector<double>& lower,
                          const std::vector<double>& upper, const LpOptions& opts = {},
                          const LpBasis* warm = nullptr);

}  // namespace mgres::milp
