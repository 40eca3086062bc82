#pragma once

// Test-only oracles, independent of the solver implementation paths they
// check.

#include <Eigen/Dense>

#include <optional>
#include <random>
#include <vector>

#include "mgres/milp/problem.hpp"

namespace mgres::test {

using milp::LinearConstraint;
using milp::MilpProblem;
using milp::Sense;
using milp::Variable;

// Enumerates every basic point of {rows, bounds}: all n-subsets of the
// combined constraint set taken as equalities, feasibility-filtered.
// Returns the best objective (maximization handled by caller's sense),
// or nullopt when no feasible vertex exists.
inline std::optional<double> vertex_enumeration_lp(const MilpProblem& p) {
  const int n = static_cast<int>(p.variables.size());
  struct Row {
    Eigen::RowVectorXd a;
    double b;
    Sense sense;
  };
  std::vector<Row> rows;
  for (const auto& c : p.constraints) {
    Row r;
    r.a = Eigen::RowVectorXd::Zero(n);
    for (auto& [id, v] : c.coeffs) r.a[id] += v;
    r.b = c.rhs;
    r.sense = c.sense;
    rows.push_back(std::move(r));
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(p.variables[j].lower)) {
      Row r;
      r.a = Eigen::RowVectorXd::Zero(n);
      r.a[j] = 1.0;
      r.b = p.variables[j].lower;
      r.sense = Sense::GreaterEqual;
      rows.push_back(std::move(r));
    }
    if (std::isfinite(p.variables[j].upper)) {
      Row r;
      r.a = Eigen::RowVectorXd::Zero(n);
      r.a[j] = 1.0;
      r.b = p.variables[j].upper;
      r.sense = Sense::LessEqual;
      rows.push_back(std::move(r));
    }
  }
  const int k = static_cast<int>(rows.size());
  if (k < n) return std::nullopt;

  Eigen::VectorXd cvec = Eigen::VectorXd::Zero(n);
  for (auto& [id, v] : p.objective) cvec[id] += v;
  const double sgn = p.sense == milp::ObjSense::Maximize ? 1.0 : -1.0;

  std::optional<double> best;
  std::vector<int> pick(n);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;

  // iterate all n-combinations of [0, k)
  while (true) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      A.row(i) = rows[idx[i]].a;
      b[i] = rows[idx[i]].b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(b);
      bool feas = true;
      for (const Row& r : rows) {
        double lhs = r.a.dot(x);
        double viol = 0.0;
        switch (r.sense) {
          case Sense::LessEqual: viol = lhs - r.b; break;
          case Sense::GreaterEqual: viol = r.b - lhs; break;
          case Sense::Equal: viol = std::abs(lhs - r.b); break;
        }
        if (viol > 1e-7) {
          feas = false;
          break;
        }
      }
      if (feas) {
        double obj = sgn * cvec.dot(x);
        if (!best || obj > *best) best = obj;
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && idx[i] == k - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (best) *best = sgn * *best;  // back to the problem's own sense
  return best;
}

// Random feasible LP: a known interior point guarantees feasibility.
inline MilpProblem random_lp(std::mt19937_64& rng, int max_n = 8, int max_m = 8) {
  std::uniform_int_distribution<int> nd(2, max_n), md(1, max_m);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), cd(-1.0, 1.0), margin(0.1, 1.5);
  const int n = nd(rng), m = md(rng);
  std::vector<Variable> vars;
  for (int j = 0; j < n; ++j) {
    Variable v;
    v.id = j;
    v.kind = milp::VarKind::Continuous;
    v.lower = 0.0;
    v.upper = 3.0;
    v.name = "x" + std::to_string(j);
    vars.push_back(v);
  }
  std::vector<double> x0(n);
  std::uniform_real_distribution<double> xd(0.2, 2.0);
  for (double& v : x0) v = xd(rng);
  std::vector<LinearConstraint> cons;
  for (int i = 0; i < m; ++i) {
    LinearConstraint c;
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      double a = coef(rng);
      if (std::abs(a) < 0.15) continue;
      c.coeffs.emplace_back(j, a);
      lhs += a * x0[j];
    }
    bool ge = (rng() & 1) == 0;
    c.sense = ge ? Sense::GreaterEqual : Sense::LessEqual;
    c.rhs = ge ? lhs - margin(rng) : lhs + margin(rng);
    c.name = "c" + std::to_string(i);
    cons.push_back(std::move(c));
  }
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < n; ++j) obj.emplace_back(j, cd(rng));
  return milp::build_problem(std::move(vars), std::move(cons), std::move(obj),
                             (rng() & 1) ? milp::ObjSense::Maximize : milp::ObjSense::Minimize);
}

// Random MILP with binaries and continuous variables; not necessarily
// feasible.
inline MilpProblem random_milp(std::mt19937_64& rng, int max_bin = 12, int max_cont = 6,
                               int max_m = 15) {
  std::uniform_int_distribution<int> bd(1, max_bin), cdn(0, max_cont), md(1, max_m);
  std::uniform_real_distribution<double> coef(-3.0, 3.0), cd(-2.0, 2.0), rhsd(-2.0, 5.0);
  const int nb = bd(rng), nc = cdn(rng), n = nb + nc;
  std::vector<Variable> vars;
  for (int j = 0; j < n; ++j) {
    Variable v;
    v.id = j;
    if (j < nb) {
      v.kind = milp::VarKind::Binary;
      v.lower = 0.0;
      v.upper = 1.0;
    } else {
      v.kind = milp::VarKind::Continuous;
      v.lower = 0.0;
      v.upper = 2.0;
    }
    v.name = "x" + std::to_string(j);
    vars.push_back(v);
  }
  const int m = md(rng);
  std::vector<LinearConstraint> cons;
  for (int i = 0; i < m; ++i) {
    LinearConstraint c;
    for (int j = 0; j < n; ++j) {
      double a = coef(rng);
      if (std::abs(a) < 0.8) continue;
      c.coeffs.emplace_back(j, a);
    }
    int s = static_cast<int>(rng() % 10);
    c.sense = s < 6 ? Sense::LessEqual : (s < 9 ? Sense::GreaterEqual : Sense::Equal);
    c.rhs = rhsd(rng);
    if (c.sense == Sense::Equal) c.rhs = std::abs(c.rhs) * 0.5;
    c.name = "c" + std::to_string(i);
    cons.push_back(std::move(c));
  }
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < n; ++j) obj.emplace_back(j, cd(rng));
  return milp::build_problem(std::move(vars), std::move(cons), std::move(obj),
                             (rng() & 1) ? milp::ObjSense::Maximize : milp::ObjSense::Minimize);
}

}  // namespace mgres::test
