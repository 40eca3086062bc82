#include "mgres/milp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

namespace mgres::milp {

namespace {

double user_sign(const MilpProblem& p) { return p.sense == ObjSense::Maximize ? 1.0 : -1.0; }

// Objective in maximization convention.
double max_obj(const MilpProblem& p, const LpResult& r) { return user_sign(p) * r.objective; }

std::vector<int> binary_ids(const MilpProblem& p) {
  std::vector<int> ids;
  for (const auto& v : p.variables)
    if (v.kind == VarKind::Binary) ids.push_back(v.id);
  return ids;
}

bool integral(const std::vector<double>& x, const std::vector<int>& bins, double tol, int* worst) {
  double worst_frac = tol;
  int worst_id = -1;
  for (int id : bins) {
    double f = std::abs(x[id] - std::round(x[id]));
    if (f > worst_frac) {
      worst_frac = f;
      worst_id = id;
    }
  }
  if (worst) *worst = worst_id;
  return worst_id < 0;
}

// Most fractional binary: distance to 0.5 minimal; ties by lowest id.
int branch_variable(const std::vector<double>& x, const std::vector<int>& bins, double tol) {
  int best = -1;
  double best_score = 1.0;
  for (int id : bins) {
    double f = x[id] - std::floor(x[id]);
    f = std::min(f, 1.0 - f);
    if (f <= tol) continue;
    double score = std::abs((x[id] - std::floor(x[id])) - 0.5);
    if (score < best_score - 1e-15) {
      best_score = score;
      best = id;
    }
  }
  return best;
}

struct Node {
  long id = 0;
  double bound = 0.0;  // parent LP bound, maximization convention
  std::vector<std::pair<int, double>> fix0;  // (var, 0/1) fixings along the path
  std::shared_ptr<LpBasis> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
    return a.id > b.id;                                // FIFO tie-break
  }
};

}  // namespace

MilpSolution solve_milp(const MilpProblem& p, const MilpOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  MilpSolution out;
  if (p.variables.empty()) throw std::invalid_argument("solve_milp: empty problem");

  const int n = static_cast<int>(p.variables.size());
  std::vector<double> lb0(n), ub0(n);
  for (int j = 0; j < n; ++j) {
    lb0[j] = p.variables[j].lower;
    ub0[j] = p.variables[j].upper;
  }
  const std::vector<int> bins = binary_ids(p);
  const double sgn = user_sign(p);

  auto apply_fixings = [&](const Node& nd, std::vector<double>& lb, std::vector<double>& ub) {
    lb = lb0;
    ub = ub0;
    for (const auto& [id, v] : nd.fix0) {
      lb[id] = v;
      ub[id] = v;
    }
  };

  // Incumbent (maximization convention).
  bool have_inc = false;
  double inc_obj = -std::numeric_limits<double>::infinity();
  std::vector<double> inc_x;

  auto try_incumbent = [&](const std::vector<double>& x, double obj_max) {
    if (!have_inc || obj_max > inc_obj) {
      have_inc = true;
      inc_obj = obj_max;
      inc_x = x;
    }
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  long nodes = 0;
  bool hit_node_limit = false;

  Node root;
  root.id = next_id++;
  root.bound = std::numeric_limits<double>::infinity();
  open.push(root);
  double best_bound = std::numeric_limits<double>::infinity();
  bool root_processed = false;

  std::vector<double> lb(n), ub(n);
  while (!open.empty()) {
    if (nodes >= opts.node_limit || elapsed() > opts.time_limit_s) {
      hit_node_limit = true;
      break;
    }
    Node nd = open.top();
    open.pop();
    best_bound = nd.bound;
    if (have_inc) {
      double gap = (best_bound - inc_obj) / std::max(1.0, std::abs(inc_obj));
      if (gap <= opts.gap_tol) break;  // proven within tolerance
    }

    apply_fixings(nd, lb, ub);
    LpResult lp = solve_lp_bounded(p, lb, ub, opts.lp, opts.warm_start ? nd.warm.get() : nullptr);
    ++nodes;

    if (lp.status == SolveStatus::Infeasible) continue;
    if (lp.status == SolveStatus::Unbounded) {
      if (!root_processed) {
        out.status = SolveStatus::Unbounded;
        out.nodes_explored = nodes;
        return out;
      }
      continue;  // cannot happen with bounded binaries; be safe
    }
    if (lp.status != SolveStatus::Optimal) {
      out.status = SolveStatus::NumericError;
      out.nodes_explored = nodes;
      return out;
    }
    root_processed = true;
    double node_bound = max_obj(p, lp);
    if (nd.bound < std::numeric_limits<double>::infinity())
      node_bound = std::min(node_bound, nd.bound);
    if (have_inc && node_bound <= inc_obj + opts.gap_tol * std::max(1.0, std::abs(inc_obj))) continue;

    int worst = -1;
    if (integral(lp.x, bins, opts.int_tol, &worst)) {
      try_incumbent(lp.x, node_bound);
      continue;
    }

    // Rounding heuristic for an initial incumbent.
    if (!have_inc) {
      std::vector<double> rl = lb, ru = ub;
      for (int id : bins) {
        double v = std::round(std::clamp(lp.x[id], lb[id], ub[id]));
        rl[id] = ru[id] = v;
      }
      LpResult rr = solve_lp_bounded(p, rl, ru, opts.lp, nullptr);
      if (rr.status == SolveStatus::Optimal) try_incumbent(rr.x, max_obj(p, rr));
    }

    int bvar = branch_variable(lp.x, bins, opts.int_tol);
    if (bvar < 0) {  // numerically integral after all
      try_incumbent(lp.x, node_bound);
      continue;
    }
    auto warm = std::make_shared<LpBasis>(lp.basis);
    for (double fixval : {0.0, 1.0}) {
      Node child;
      child.id = next_id++;
      child.bound = node_bound;
      child.fix0 = nd.fix0;
      child.fix0.emplace_back(bvar, fixval);
      child.warm = warm;
      open.push(child);
    }
  }

  out.nodes_explored = nodes;
  if (!have_inc) {
    out.status = hit_node_limit ? SolveStatus::NodeLimit : SolveStatus::Infeasible;
    return out;
  }
  double remaining = open.empty() && !hit_node_limit ? inc_obj : best_bound;
  out.gap = std::max(0.0, (remaining - inc_obj) / std::max(1.0, std::abs(inc_obj)));
  out.values = inc_x;
  out.objective = sgn * inc_obj;
  if (hit_node_limit)
    out.status = SolveStatus::NodeLimit;
  else if (out.gap <= 1e-12)
    out.status = SolveStatus::Optimal;
  else if (out.gap <= opts.gap_tol)
    out.status = SolveStatus::Optimal;
  else
    out.status = SolveStatus::GapLimit;
  return out;
}

MilpSolution brute_force_milp(const MilpProblem& p, const LpOptions& lp_opts) {
  const std::vector<int> bins = binary_ids(p);
  if (bins.size() > 20)
    throw std::invalid_argument("brute_force_milp: too many binaries (" +
                                std::to_string(bins.size()) + " > 20)");
  const int n = static_cast<int>(p.variables.size());
  std::vector<double> lb(n), ub(n);
  for (int j = 0; j < n; ++j) {
    lb[j] = p.variables[j].lower;
    ub[j] = p.variables[j].upper;
  }
  const double sgn = user_sign(p);

  MilpSolution out;
  out.status = SolveStatus::Infeasible;
  double best = -std::numeric_limits<double>::infinity();
  const std::uint64_t total = 1ull << bins.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<double> l = lb, u = ub;
    bool ok = true;
    for (size_t k = 0; k < bins.size(); ++k) {
      double v = (mask >> k) & 1 ? 1.0 : 0.0;
      int id = bins[k];
      if (v < lb[id] - 0.5 || v > ub[id] + 0.5) {  // respects pre-fixed binaries
        ok = false;
        break;
      }
      l[id] = u[id] = v;
    }
    if (!ok) continue;
    LpResult r = solve_lp_bounded(p, l, u, lp_opts, nullptr);
    ++out.nodes_explored;
    if (r.status != SolveStatus::Optimal) continue;
    double obj = sgn * r.objective;
    if (obj > best + 1e-12 || out.status == SolveStatus::Infeasible) {
      best = obj;
      out.values = r.x;
      out.objective = r.objective;
      out.status = SolveStatus::Optimal;
      out.gap = 0.0;
    }
  }
  return out;
}

}  // namespace mgres::milp
