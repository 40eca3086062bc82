#pragma once

#include <limits>
#include <string>
#include <vector>

namespace mgres::milp {

enum class VarKind { Continuous, Binary };

struct Variable {
  int id = 0;  // must equal the variable's position in MilpProblem::variables
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  std::string name;
};

enum class Sense { LessEqual, Equal, GreaterEqual };

struct LinearConstraint {
  std::vector<std::pair<int, double>> coeffs;  // (variable id, coefficient)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  std::string name;
};

enum class ObjSense { Maximize, Minimize };

struct MilpProblem {
  std::vector<Variable> variables;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<int, double>> objective;
  ObjSense sense = ObjSense::Maximize;

  int num_binaries() const {
    int n = 0;
    for (const auto& v : variables)
      if (v.kind == VarKind::Binary) ++n;
    return n;
  }
};

enum class SolveStatus {
  Optimal,
  Infeasible,
  Unbounded,
  GapLimit,
  NodeLimit,
  NumericError,
};

std::string to_string(SolveStatus s);

struct MilpSolution {
  SolveStatus status = SolveStatus::NumericError;
  std::vector<double> values;  // indexed by variable id; empty if no incumbent
  double objective = 0.0;
  double gap = std::numeric_limits<double>::infinity();  // relative bound gap
  long nodes_explored = 0;

  bool has_solution() const { return !values.empty(); }
};

/// Validates references and coefficient finiteness, merges duplicate
/// (id, coeff) entries by summation. Throws std::invalid_argument.
MilpProblem build_problem(std::vector<Variable> vars,
                          std::vector<LinearConstraint> constraints,
                          std::vector<std::pair<int, double>> objective,
                          ObjSense sense);

}  // namespace mgres::milp
