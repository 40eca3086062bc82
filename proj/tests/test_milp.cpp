#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mgres/milp/lp_format.hpp"
#include "mgres/milp/problem.hpp"
#include "mgres/milp/simplex.hpp"
#include "mgres/milp/solver.hpp"
#include "support/oracles.hpp"

using namespace mgres;
using namespace mgres::milp;
using mgres::test::random_lp;
using mgres::test::random_milp;
using mgres::test::vertex_enumeration_lp;

namespace {

Variable make_var(int id, VarKind kind, double lo, double hi, const std::string& name) {
  Variable v;
  v.id = id;
  v.kind = kind;
  v.lower = lo;
  v.upper = hi;
  v.name = name;
  return v;
}

}  // namespace

TEST_CASE("build_problem validates and merges") {
  std::vector<Variable> vars{make_var(0, VarKind::Binary, 0, 1, "a"),
                             make_var(1, VarKind::Binary, 0, 1, "b")};
  LinearConstraint c;
  c.coeffs = {{0, 1.0}, {1, 1.0}, {0, 2.0}};  // duplicate id 0 merges to 3.0
  c.sense = Sense::LessEqual;
  c.rhs = 1.0;
  auto p = build_problem(vars, {c}, {{0, 1.0}, {1, 1.0}}, ObjSense::Maximize);
  CHECK(p.variables.size() == 2);
  CHECK(p.constraints.size() == 1);
  CHECK(p.constraints[0].coeffs.size() == 2);
  double merged = 0;
  for (auto& [id, v] : p.constraints[0].coeffs)
    if (id == 0) merged = v;
  CHECK(merged == doctest::Approx(3.0));

  LinearConstraint bad;
  bad.coeffs = {{7, 1.0}};
  CHECK_THROWS_AS(build_problem(vars, {bad}, {}, ObjSense::Maximize), std::invalid_argument);

  LinearConstraint nan_c;
  nan_c.coeffs = {{0, std::numeric_limits<double>::quiet_NaN()}};
  CHECK_THROWS_AS(build_problem(vars, {nan_c}, {}, ObjSense::Maximize), std::invalid_argument);
}

TEST_CASE("solve_lp basics") {
  // max x, x <= 3, 0 <= x <= 10
  std::vector<Variable> vars{make_var(0, VarKind::Continuous, 0, 10, "x")};
  LinearConstraint c;
  c.coeffs = {{0, 1.0}};
  c.sense = Sense::LessEqual;
  c.rhs = 3.0;
  auto p = build_problem(vars, {c}, {{0, 1.0}}, ObjSense::Maximize);
  auto r = solve_lp(p);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(r.objective == doctest::Approx(3.0).epsilon(1e-9));

  // max x+y, x+y <= 1, x,y in [0,1]
  std::vector<Variable> v2{make_var(0, VarKind::Continuous, 0, 1, "x"),
                           make_var(1, VarKind::Continuous, 0, 1, "y")};
  LinearConstraint c2;
  c2.coeffs = {{0, 1.0}, {1, 1.0}};
  c2.sense = Sense::LessEqual;
  c2.rhs = 1.0;
  auto p2 = build_problem(v2, {c2}, {{0, 1.0}, {1, 1.0}}, ObjSense::Maximize);
  auto r2 = solve_lp(p2);
  REQUIRE(r2.status == SolveStatus::Optimal);
  CHECK(r2.objective == doctest::Approx(1.0).epsilon(1e-9));

  // infeasible: x >= 2 with x <= 1
  std::vector<Variable> v3{make_var(0, VarKind::Continuous, 0, 1, "x")};
  LinearConstraint c3;
  c3.coeffs = {{0, 1.0}};
  c3.sense = Sense::GreaterEqual;
  c3.rhs = 2.0;
  auto p3 = build_problem(v3, {c3}, {{0, 1.0}}, ObjSense::Maximize);
  CHECK(solve_lp(p3).status == SolveStatus::Infeasible);

  // unbounded: max x, x >= 0 free above
  std::vector<Variable> v4{make_var(0, VarKind::Continuous, 0,
                                    std::numeric_limits<double>::infinity(), "x")};
  auto p4 = build_problem(v4, {}, {{0, 1.0}}, ObjSense::Maximize);
  CHECK(solve_lp(p4).status == SolveStatus::Unbounded);
}

TEST_CASE("solve_lp matches vertex enumeration on seeded instances") {
  std::mt19937_64 rng(20240817);
  int done = 0;
  while (done < 20) {
    auto p = random_lp(rng);
    auto oracle = vertex_enumeration_lp(p);
    auto r = solve_lp(p);
    if (!oracle) {
      CHECK(r.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(*oracle).epsilon(1e-6).scale(1.0));
    ++done;
  }
}

TEST_CASE("weak duality bound holds at optimality") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 25; ++k) {
    auto p = random_lp(rng, 6, 6);
    auto r = solve_lp(p);
    if (r.status != SolveStatus::Optimal) continue;
    // Maximization convention for the bound.
    double sgn = p.sense == ObjSense::Maximize ? 1.0 : -1.0;
    double bound = 0.0;
    for (size_t i = 0; i < p.constraints.size(); ++i) bound += sgn * r.duals[i] * p.constraints[i].rhs;
    for (size_t j = 0; j < p.variables.size(); ++j) {
      double d = sgn * r.reduced_costs[j];
      if (d > 0) bound += d * p.variables[j].upper;
      else bound += d * p.variables[j].lower;
    }
    CHECK(sgn * r.objective <= bound + 1e-6);
  }
}

TEST_CASE("solve_lp is deterministic") {
  std::mt19937_64 rng(99);
  auto p = random_lp(rng);
  auto r1 = solve_lp(p);
  auto r2 = solve_lp(p);
  REQUIRE(r1.status == r2.status);
  if (r1.status == SolveStatus::Optimal) {
    CHECK(r1.objective == r2.objective);
    for (size_t j = 0; j < r1.x.size(); ++j) CHECK(r1.x[j] == r2.x[j]);
  }
}

TEST_CASE("solve_milp basics") {
  // max x1 + x2, x1 + x2 <= 1, binaries
  std::vector<Variable> vars{make_var(0, VarKind::Binary, 0, 1, "x1"),
                             make_var(1, VarKind::Binary, 0, 1, "x2")};
  LinearConstraint c;
  c.coeffs = {{0, 1.0}, {1, 1.0}};
  c.sense = Sense::LessEqual;
  c.rhs = 1.0;
  auto p = build_problem(vars, {c}, {{0, 1.0}, {1, 1.0}}, ObjSense::Maximize);
  auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(1.0));

  // max x with x = b0 + 2 b1 + 4 b2 in [0,5], 2x <= 3  ->  x = 1
  std::vector<Variable> v2{make_var(0, VarKind::Binary, 0, 1, "b0"),
                           make_var(1, VarKind::Binary, 0, 1, "b1"),
                           make_var(2, VarKind::Binary, 0, 1, "b2"),
                           make_var(3, VarKind::Continuous, 0, 5, "x")};
  LinearConstraint link;  // x - b0 - 2 b1 - 4 b2 = 0
  link.coeffs = {{3, 1.0}, {0, -1.0}, {1, -2.0}, {2, -4.0}};
  link.sense = Sense::Equal;
  link.rhs = 0.0;
  LinearConstraint cap;  // 2x <= 3
  cap.coeffs = {{3, 2.0}};
  cap.sense = Sense::LessEqual;
  cap.rhs = 3.0;
  auto p2 = build_problem(v2, {link, cap}, {{3, 1.0}}, ObjSense::Maximize);
  auto s2 = solve_milp(p2);
  REQUIRE(s2.status == SolveStatus::Optimal);
  CHECK(s2.objective == doctest::Approx(1.0));

  // infeasible: binary x >= 2
  std::vector<Variable> v3{make_var(0, VarKind::Binary, 0, 1, "x")};
  LinearConstraint c3;
  c3.coeffs = {{0, 1.0}};
  c3.sense = Sense::GreaterEqual;
  c3.rhs = 2.0;
  auto p3 = build_problem(v3, {c3}, {{0, 1.0}}, ObjSense::Maximize);
  CHECK(solve_milp(p3).status == SolveStatus::Infeasible);
  CHECK(brute_force_milp(p3).status == SolveStatus::Infeasible);
}

TEST_CASE("brute force knapsack is exact") {
  // values {6,5,4}, weights {3,2,2}, capacity 4 -> best = items 2,3 = 9
  std::vector<Variable> vars{make_var(0, VarKind::Binary, 0, 1, "i1"),
                             make_var(1, VarKind::Binary, 0, 1, "i2"),
                             make_var(2, VarKind::Binary, 0, 1, "i3")};
  LinearConstraint c;
  c.coeffs = {{0, 3.0}, {1, 2.0}, {2, 2.0}};
  c.sense = Sense::LessEqual;
  c.rhs = 4.0;
  auto p = build_problem(vars, {c}, {{0, 6.0}, {1, 5.0}, {2, 4.0}}, ObjSense::Maximize);
  auto b = brute_force_milp(p);
  REQUIRE(b.status == SolveStatus::Optimal);
  CHECK(b.objective == doctest::Approx(9.0));
  auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::Optimal);
  CHECK(s.objective == doctest::Approx(9.0));
}

TEST_CASE("brute force with zero binaries equals solve_lp") {
  std::mt19937_64 rng(5);
  auto p = random_lp(rng, 5, 5);
  auto lp = solve_lp(p);
  auto bf = brute_force_milp(p);
  REQUIRE(lp.status == bf.status);
  if (lp.status == SolveStatus::Optimal)
    CHECK(bf.objective == doctest::Approx(lp.objective).epsilon(1e-9));
}

TEST_CASE("brute force rejects too many binaries") {
  std::vector<Variable> vars;
  for (int i = 0; i < 21; ++i) vars.push_back(make_var(i, VarKind::Binary, 0, 1, "b"));
  auto p = build_problem(vars, {}, {{0, 1.0}}, ObjSense::Maximize);
  CHECK_THROWS_AS(brute_force_milp(p), std::invalid_argument);
}

TEST_CASE("solve_milp equals brute force on seeded instances") {
  std::mt19937_64 rng(424242);
  int done = 0, feasible = 0;
  while (done < 100) {
    auto p = random_milp(rng);
    auto bf = brute_force_milp(p);
    auto bb = solve_milp(p);
    ++done;
    if (bf.status == SolveStatus::Infeasible) {
      CHECK(bb.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible;
    REQUIRE(bb.status == SolveStatus::Optimal);
    CHECK(bb.objective == doctest::Approx(bf.objective).epsilon(1e-6).scale(1.0));
  }
  CHECK(feasible > 30);  // the generator should not be degenerate
}

TEST_CASE("milp objective never exceeds the LP relaxation") {
  std::mt19937_64 rng(777);
  for (int k = 0; k < 20; ++k) {
    auto p = random_milp(rng, 8, 4, 10);
    auto bb = solve_milp(p);
    if (bb.status != SolveStatus::Optimal) continue;
    auto lp = solve_lp(p);
    REQUIRE(lp.status == SolveStatus::Optimal);
    double sgn = p.sense == ObjSense::Maximize ? 1.0 : -1.0;
    CHECK(sgn * bb.objective <= sgn * lp.objective + 1e-6);
  }
}

TEST_CASE("objective scaling keeps the argmax assignment") {
  std::mt19937_64 rng(31337);
  int checked = 0;
  while (checked < 10) {
    auto p = random_milp(rng, 8, 3, 8);
    auto base = solve_milp(p);
    if (base.status != SolveStatus::Optimal) continue;
    ++checked;
    for (double lambda : {0.5, 2.0}) {
      MilpProblem q = p;
      for (auto& [id, c] : q.objective) c *= lambda;
      auto s = solve_milp(q);
      REQUIRE(s.status == SolveStatus::Optimal);
      for (const auto& v : p.variables) {
        if (v.kind != VarKind::Binary) continue;
        CHECK(std::round(s.values[v.id]) == std::round(base.values[v.id]));
      }
    }
  }
}

TEST_CASE("solve_milp is deterministic across repeated solves") {
  std::mt19937_64 rng(2024);
  auto p = random_milp(rng, 10, 4, 12);
  auto a = solve_milp(p);
  auto b = solve_milp(p);
  REQUIRE(a.status == b.status);
  if (a.has_solution()) {
    REQUIRE(b.has_solution());
    CHECK(a.objective == b.objective);
    for (size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
    CHECK(a.nodes_explored == b.nodes_explored);
  }
}

TEST_CASE("lp format writer is stable") {
  std::vector<Variable> vars{make_var(0, VarKind::Binary, 0, 1, "pick"),
                             make_var(1, VarKind::Continuous, 0, 2.5, "flow")};
  LinearConstraint c;
  c.coeffs = {{0, 2.0}, {1, -1.0}};
  c.sense = Sense::GreaterEqual;
  c.rhs = 0.5;
  c.name = "gate";
  auto p = build_problem(vars, {c}, {{0, 3.0}, {1, 1.0}}, ObjSense::Maximize);
  std::string s1 = write_lp_format(p);
  std::string s2 = write_lp_format(p);
  CHECK(s1 == s2);
  CHECK(s1 == "Maximize\n obj: 3 pick + flow\nSubject To\n gate: 2 pick - flow >= 0.5\n"
              "Bounds\n 0 <= flow <= 2.5\nBinary\n pick\nEnd\n");
}
