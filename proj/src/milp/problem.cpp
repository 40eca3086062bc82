#include "mgres/milp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mgres::milp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::GapLimit: return "gap-limit";
    case SolveStatus::NodeLimit: return "node-limit";
    case SolveStatus::NumericError: return "numeric-error";
  }
  return "unknown";
}

namespace {

std::vector<std::pair<int, double>> merge_coeffs(const std::vector<std::pair<int, double>>& in,
                                                 int num_vars, const std::string& where) {
  std::map<int, double> acc;
  for (const auto& [id, c] : in) {
    if (id < 0 || id >= num_vars)
      throw std::invalid_argument(where + ": dangling variable reference " + std::to_string(id));
    if (!std::isfinite(c)) throw std::invalid_argument(where + ": non-finite coefficient");
    acc[id] += c;
  }
  return {acc.begin(), acc.end()};
}

}  // namespace

MilpProblem build_problem(std::vector<Variable> vars, std::vector<LinearConstraint> constraints,
                          std::vector<std::pair<int, double>> objective, ObjSense sense) {
  const int n = static_cast<int>(vars.size());
  for (int i = 0; i < n; ++i) {
    Variable& v = vars[i];
    if (v.id != i) throw std::invalid_argument("variable id must equal its index (got " +
                                               std::to_string(v.id) + " at " + std::to_string(i) + ")");
    if (!(v.lower <= v.upper)) throw std::invalid_argument("variable '" + v.name + "': lower > upper");
    if (v.kind == VarKind::Binary) {
      if (v.lower < 0.0 || v.upper > 1.0)
        throw std::invalid_argument("binary variable '" + v.name + "' bounds outside [0,1]");
    }
  }
  for (auto& c : constraints) {
    c.coeffs = merge_coeffs(c.coeffs, n, "constraint '" + c.name + "'");
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint '" + c.name + "': non-finite rhs");
  }
  objective = merge_coeffs(objective, n, "objective");

  MilpProblem p;
  p.variables = std::move(vars);
  p.constraints = std::move(constraints);
  p.objective = std::move(objective);
  p.sense = sense;
  return p;
}

}  // namespace mgres::milp
