#pragma once

#include <string>

#include "mgres/milp/problem.hpp"

namespace mgres::milp {

/// Renders the problem in the standard LP text format (CPLEX-style) for
/// cross-checking with external solvers. Deterministic, bit-exact output.
std::string write_lp_format(const MilpProblem& p);

}  // namespace mgres::milp
