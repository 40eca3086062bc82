#include "mgres/milp/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgres::milp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum VStat : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2, kFreeZero = 3 };

struct Eta {
  int row;
  std::vector<std::pair<int, double>> w;  // sparse pivot column (B^{-1} a_q)
  double wr;                              // pivot element w[row]
};

class Engine {
 public:
  Engine(const MilpProblem& p, const std::vector<double>& lb_in, const std::vector<double>& ub_in,
         const LpOptions& opts)
      : opts_(opts), n_(static_cast<int>(p.variables.size())),
        m_(static_cast<int>(p.constraints.size())), ncols_(n_ + m_) {
    cols_.resize(ncols_);
    lb_.assign(ncols_, 0.0);
    ub_.assign(ncols_, 0.0);
    cost_.assign(ncols_, 0.0);
    rhs_.assign(m_, 0.0);

    for (int j = 0; j < n_; ++j) {
      lb_[j] = lb_in[j];
      ub_[j] = ub_in[j];
    }
    const double sign = p.sense == ObjSense::Maximize ? 1.0 : -1.0;
    for (const auto& [id, c] : p.objective) cost_[id] = sign * c;

    for (int i = 0; i < m_; ++i) {
      const LinearConstraint& row = p.constraints[i];
      for (const auto& [id, c] : row.coeffs)
        if (c != 0.0) cols_[id].emplace_back(i, c);
      rhs_[i] = row.rhs;
      int sj = n_ + i;
      cols_[sj].emplace_back(i, 1.0);
      switch (row.sense) {
        case Sense::LessEqual: lb_[sj] = 0.0; ub_[sj] = kInf; break;
        case Sense::GreaterEqual: lb_[sj] = -kInf; ub_[sj] = 0.0; break;
        case Sense::Equal: lb_[sj] = 0.0; ub_[sj] = 0.0; break;
      }
    }
  }

  LpResult run(const LpBasis* warm) {
    if (!init_basis(warm)) return finish(SolveStatus::NumericError);
    compute_basics();

    // Phase 1: drive basic infeasibilities to zero.
    SolveStatus st = iterate(/*phase1=*/true);
    if (st != SolveStatus::Optimal) return finish(st);
    if (infeasibility() > opts_.feas_tol) return finish(SolveStatus::Infeasible);

    st = iterate(/*phase1=*/false);
    return finish(st);
  }

 private:
  const LpOptions opts_;
  int n_, m_, ncols_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> lb_, ub_, cost_, rhs_;

  std::vector<int> basis_;            // column basic in each row
  std::vector<std::uint8_t> vstat_;
  std::vector<double> x_;             // current values, all columns
  std::vector<int> row_of_basic_;     // column -> row if basic, else -1

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  bool lu_ok_ = false;
  std::vector<Eta> etas_;
  long iters_ = 0;
  int stall_ = 0;
  bool bland_ = false;

  double nonbasic_value(int j) const {
    switch (vstat_[j]) {
      case kAtLower: return lb_[j];
      case kAtUpper: return ub_[j];
      default: return 0.0;  // free at zero
    }
  }

  bool init_basis(const LpBasis* warm) {
    basis_.assign(m_, -1);
    vstat_.assign(ncols_, kAtLower);
    x_.assign(ncols_, 0.0);
    row_of_basic_.assign(ncols_, -1);

    bool used_warm = false;
    if (warm && static_cast<int>(warm->basic.size()) == m_ &&
        static_cast<int>(warm->vstat.size()) == ncols_) {
      basis_ = warm->basic;
      vstat_ = warm->vstat;
      std::vector<char> seen(ncols_, 0);
      bool ok = true;
      for (int i = 0; i < m_ && ok; ++i) {
        int j = basis_[i];
        if (j < 0 || j >= ncols_ || seen[j]) ok = false;
        else seen[j] = 1;
      }
      if (ok && refactorize()) {
        used_warm = true;
        for (int i = 0; i < m_; ++i) vstat_[basis_[i]] = kBasic;
      }
    }
    if (!used_warm) {
      for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
      for (int j = 0; j < ncols_; ++j) vstat_[j] = kAtLower;
      for (int i = 0; i < m_; ++i) vstat_[n_ + i] = kBasic;
      if (!refactorize()) return false;
    }
    // Nonbasic columns sit at a finite bound, preferring the one nearer zero.
    for (int j = 0; j < ncols_; ++j) {
      if (vstat_[j] == kBasic) {
        row_of_basic_[j] = -1;
        continue;
      }
      if (std::isfinite(lb_[j]) && std::isfinite(ub_[j]))
        vstat_[j] = (vstat_[j] == kAtUpper) ? kAtUpper : kAtLower;
      else if (std::isfinite(lb_[j])) vstat_[j] = kAtLower;
      else if (std::isfinite(ub_[j])) vstat_[j] = kAtUpper;
      else vstat_[j] = kFreeZero;
      x_[j] = nonbasic_value(j);
    }
    for (int i = 0; i < m_; ++i) row_of_basic_[basis_[i]] = i;
    return true;
  }

  bool refactorize() {
    if (m_ == 0) {
      lu_ok_ = true;
      etas_.clear();
      return true;
    }
    Eigen::SparseMatrix<double> B(m_, m_);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m_; ++i)
      for (const auto& [r, v] : cols_[basis_[i]]) trip.emplace_back(r, i, v);
    B.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(B);
    lu_ok_ = lu_.info() == Eigen::Success;
    etas_.clear();
    return lu_ok_;
  }

  // x = B^{-1} v  (v overwritten)
  void ftran(Eigen::VectorXd& v) {
    if (m_ == 0) return;
    v = lu_.solve(v);
    for (const Eta& e : etas_) {
      double t = v[e.row] / e.wr;
      if (t != 0.0) {
        for (const auto& [i, wi] : e.w) v[i] -= wi * t;
      }
      v[e.row] = t;
    }
  }

  // y = B^{-T} v  (v overwritten)
  void btran(Eigen::VectorXd& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      double s = 0.0;
      for (const auto& [i, wi] : e.w)
        if (i != e.row) s += wi * v[i];
      v[e.row] = (v[e.row] - s) / e.wr;
    }
    v = lu_.transpose().solve(v);
  }

  void compute_basics() {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) r[i] = rhs_[i];
    for (int j = 0; j < ncols_; ++j) {
      if (vstat_[j] == kBasic) continue;
      double v = nonbasic_value(j);
      x_[j] = v;
      if (v != 0.0)
        for (const auto& [row, coef] : cols_[j]) r[row] -= coef * v;
    }
    ftran(r);
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = r[i];
  }

  double infeasibility() const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      int j = basis_[i];
      if (x_[j] < lb_[j]) s += lb_[j] - x_[j];
      else if (x_[j] > ub_[j]) s += x_[j] - ub_[j];
    }
    return s;
  }

  // Reduced costs for the active phase. Returns duals used.
  Eigen::VectorXd current_duals(bool phase1) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m_);
    if (phase1) {
      for (int i = 0; i < m_; ++i) {
        int j = basis_[i];
        if (x_[j] < lb_[j] - opts_.feas_tol) g[i] = -1.0;       // want to increase
        else if (x_[j] > ub_[j] + opts_.feas_tol) g[i] = 1.0;   // want to decrease
      }
    } else {
      for (int i = 0; i < m_; ++i) g[i] = cost_[basis_[i]];
    }
    Eigen::VectorXd y = g;
    btran(y);
    return y;
  }

  double col_dot(const Eigen::VectorXd& y, int j) const {
    double s = 0.0;
    for (const auto& [row, coef] : cols_[j]) s += y[row] * coef;
    return s;
  }

  SolveStatus iterate(bool phase1) {
    while (true) {
      if (iters_ > opts_.max_iterations) return SolveStatus::NumericError;
      if (phase1 && infeasibility() <= opts_.feas_tol) return SolveStatus::Optimal;

      Eigen::VectorXd y = current_duals(phase1);

      int enter = -1;
      int dir = 0;  // +1 entering increases, -1 decreases
      double best = phase1 ? opts_.feas_tol : opts_.opt_tol;
      for (int j = 0; j < ncols_; ++j) {
        if (vstat_[j] == kBasic) continue;
        if (ub_[j] - lb_[j] < 1e-14) continue;  // fixed
        // Maximization phase 2: d_j = c_j - y.a_j; increase attractive if d_j > 0.
        // Phase 1: infeasibility derivative along +e_j is  y.a_j (y = g^T B^{-1});
        // increase attractive if y.a_j > 0 reduces inf -> handled via sign below.
        double d = phase1 ? col_dot(y, j) : (cost_[j] - col_dot(y, j));
        bool can_up = vstat_[j] == kAtLower || vstat_[j] == kFreeZero;
        bool can_down = vstat_[j] == kAtUpper || vstat_[j] == kFreeZero;
        double score = 0.0;
        int d_dir = 0;
        if (can_up && d > (phase1 ? opts_.feas_tol : opts_.opt_tol)) { score = d; d_dir = 1; }
        else if (can_down && -d > (phase1 ? opts_.feas_tol : opts_.opt_tol)) { score = -d; d_dir = -1; }
        if (d_dir == 0) continue;
        if (bland_) { enter = j; dir = d_dir; break; }  // lowest index
        if (score > best) { best = score; enter = j; dir = d_dir; }
      }
      if (enter < 0) {
        if (phase1) return SolveStatus::Optimal;  // phase-1 stationary; feasibility checked by caller
        return SolveStatus::Optimal;
      }

      // Direction of basic change: x_B -= dir * t * w, w = B^{-1} a_enter.
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
      for (const auto& [row, coef] : cols_[enter]) w[row] = coef;
      ftran(w);

      double limit = ub_[enter] - lb_[enter];  // own bound flip distance
      int leave_row = -1;
      double best_piv = 0.0;
      const double piv_tol = 1e-9;
      for (int i = 0; i < m_; ++i) {
        double wi = dir * w[i];
        if (std::abs(wi) < piv_tol) continue;
        int bj = basis_[i];
        double t;
        if (wi > 0) {
          // Basic decreases. An infeasible-below basic moving further down has
          // no breakpoint; one above its upper blocks when it reaches it.
          if (phase1 && x_[bj] < lb_[bj] - opts_.feas_tol) continue;
          double target = (phase1 && x_[bj] > ub_[bj] + opts_.feas_tol) ? ub_[bj] : lb_[bj];
          if (!std::isfinite(target)) continue;
          t = (x_[bj] - target) / wi;
        } else {
          if (phase1 && x_[bj] > ub_[bj] + opts_.feas_tol) continue;
          double target = (phase1 && x_[bj] < lb_[bj] - opts_.feas_tol) ? lb_[bj] : ub_[bj];
          if (!std::isfinite(target)) continue;
          t = (x_[bj] - target) / wi;  // wi < 0, target >= x
        }
        if (t < 0.0) t = 0.0;
        bool better;
        if (t < limit - 1e-12) better = true;
        else if (t > limit + 1e-12) better = false;
        else if (leave_row < 0) better = true;
        else if (bland_) better = basis_[i] < basis_[leave_row];
        else better = std::abs(w[i]) > std::abs(best_piv) + 1e-15 ||
                      (std::abs(std::abs(w[i]) - std::abs(best_piv)) <= 1e-15 &&
                       basis_[i] < basis_[leave_row]);
        if (better) {
          limit = std::min(limit, t);
          leave_row = i;
          best_piv = w[i];
        }
      }

      if (!std::isfinite(limit)) {
        if (phase1) return SolveStatus::NumericError;  // cannot happen: inf bounded below
        return SolveStatus::Unbounded;
      }

      ++iters_;
      if (limit < 1e-11) {
        if (++stall_ > opts_.stall_limit) bland_ = true;
      } else {
        stall_ = 0;
        bland_ = false;
      }

      // Apply the step.
      double t = std::max(limit, 0.0);
      if (t != 0.0) {
        for (int i = 0; i < m_; ++i)
          if (w[i] != 0.0) x_[basis_[i]] -= dir * t * w[i];
      }
      x_[enter] = nonbasic_value(enter) + dir * t;

      if (leave_row < 0) {
        // bound flip, no basis change
        vstat_[enter] = (dir > 0) ? kAtUpper : kAtLower;
        x_[enter] = nonbasic_value(enter);
        continue;
      }

      int leave = basis_[leave_row];
      // Leaving variable parks at the bound it hit.
      double wl = dir * w[leave_row];
      std::uint8_t leave_stat;
      if (wl > 0) {
        bool was_above = phase1 && x_[leave] > ub_[leave] + opts_.feas_tol;
        leave_stat = was_above ? kAtUpper : kAtLower;
      } else {
        bool was_below = phase1 && x_[leave] < lb_[leave] - opts_.feas_tol;
        leave_stat = was_below ? kAtLower : kAtUpper;
      }
      // Snap exactly onto the bound.
      x_[leave] = (leave_stat == kAtLower) ? lb_[leave] : ub_[leave];
      if (!std::isfinite(x_[leave])) x_[leave] = 0.0;

      basis_[leave_row] = enter;
      row_of_basic_[leave] = -1;
      row_of_basic_[enter] = leave_row;
      vstat_[leave] = leave_stat;
      vstat_[enter] = kBasic;

      Eta e;
      e.row = leave_row;
      e.wr = w[leave_row];
      for (int i = 0; i < m_; ++i)
        if (w[i] != 0.0) e.w.emplace_back(i, w[i]);
      etas_.push_back(std::move(e));

      if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
        if (!refactorize()) return SolveStatus::NumericError;
        compute_basics();
      }
    }
  }

  LpResult finish(SolveStatus st) {
    LpResult res;
    res.iterations = iters_;
    res.status = st;
    if (st != SolveStatus::Optimal) {
      if (st == SolveStatus::Unbounded || st == SolveStatus::Infeasible) {
        res.basis.basic = basis_;
        res.basis.vstat = vstat_;
      }
      return res;
    }
    // Clean recompute of basics from a fresh factorization.
    if (!refactorize()) {
      res.status = SolveStatus::NumericError;
      return res;
    }
    compute_basics();
    if (infeasibility() > 100 * opts_.feas_tol) {
      res.status = SolveStatus::NumericError;
      return res;
    }
    res.x.assign(n_, 0.0);
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) {
      res.x[j] = x_[j];
      obj += cost_[j] * x_[j];
    }
    res.objective = obj;  // caller flips sign for Minimize
    Eigen::VectorXd y = current_duals(false);
    res.duals.assign(y.data(), y.data() + m_);
    res.reduced_costs.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) res.reduced_costs[j] = cost_[j] - col_dot(y, j);
    res.basis.basic = basis_;
    res.basis.vstat = vstat_;
    return res;
  }
};

}  // namespace

LpResult solve_lp_bounded(const MilpProblem& p, const std::vector<double>& lower,
                          const std::vector<double>& upper, const LpOptions& opts,
                          const LpBasis* warm) {
  if (p.variables.empty()) {
    LpResult r;
    r.status = SolveStatus::NumericError;
    return r;
  }
  for (size_t j = 0; j < lower.size(); ++j) {
    if (lower[j] > upper[j] + 1e-12) {
      LpResult r;
      r.status = SolveStatus::Infeasible;
      return r;
    }
  }
  Engine eng(p, lower, upper, opts);
  LpResult res = eng.run(warm);
  if (res.status == SolveStatus::Optimal && p.sense == ObjSense::Minimize) {
    res.objective = -res.objective;
    for (double& d : res.duals) d = -d;
    for (double& d : res.reduced_costs) d = -d;
  }
  return res;
}

LpResult solve_lp(const MilpProblem& p, const LpOptions& opts) {
  std::vector<double> lb(p.variables.size()), ub(p.variables.size());
  for (size_t j = 0; j < p.variables.size(); ++j) {
    lb[j] = p.variables[j].lower;
    ub[j] = p.variables[j].upper;
  }
  return solve_lp_bounded(p, lb, ub, opts, nullptr);
}

}  // namespace mgres::milp
