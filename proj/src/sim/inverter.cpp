#include "mgres/sim/inverter.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mgres::sim {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

void InverterParams::validate() const {
  if (!(omega_c > 0)) throw std::invalid_argument("inverter: omega_c must be > 0");
  if (!(l > 0)) throw std::invalid_argument("inverter: l must be > 0");
  if (r < 0) throw std::invalid_argument("inverter: r must be >= 0");
  if (!(omega_set > 0) || !(omega_0 > 0))
    throw std::invalid_argument("inverter: omega_set and omega_0 must be > 0");
  if (d_p < 0 || d_q < 0) throw std::invalid_argument("inverter: droop gains must be >= 0");
  if (!(power_base_w > 0)) throw std::invalid_argument("inverter: power_base_w must be > 0");
}

InverterState state_derivative(const InverterState& s, const InverterParams& p,
                               double p_load, double q_load) {
  const double ct = std::cos(s.theta);
  const double st = std::sin(s.theta);
  InverterState d;
  d.p = p.omega_c * (s.v * ct * s.i_d + s.v * st * s.i_q - s.p);
  d.q = p.omega_c * (s.v * st * s.i_d - s.v * ct * s.i_q - s.q);
  d.theta = s.omega - p.omega_0;
  d.omega = p.omega_c * (p.omega_set - s.omega + p.d_p_pu() * (s.p - p_load));
  d.v = p.omega_c * (p.v_set - s.v + p.d_q * (s.q - q_load));
  d.i_d = (s.v * ct - p.v_bus - p.r * s.i_d) / p.l + p.omega_0 * s.i_q;
  d.i_q = (s.v * st - p.r * s.i_q) / p.l - p.omega_0 * s.i_d;
  return d;
}

namespace {

double residual_norm(const InverterState& s, const InverterParams& p, double pl, double ql) {
  auto d = state_derivative(s, p, pl, ql).as_array();
  double m = 0.0;
  for (double v : d) m = std::max(m, std::abs(v));
  return m;
}

// Circuit response at a given inverter voltage phasor: currents into the bus
// and the resulting terminal powers.
void circuit_at(double theta, double v, const InverterParams& p, double& i_d, double& i_q,
                double& pw, double& qw) {
  const double x = p.omega_0 * p.l;
  const double den = p.r * p.r + x * x;
  const double dv_d = v * std::cos(theta) - p.v_bus;
  const double dv_q = v * std::sin(theta);
  i_d = (p.r * dv_d + x * dv_q) / den;
  i_q = (p.r * dv_q - x * dv_d) / den;
  pw = v * std::cos(theta) * i_d + v * std::sin(theta) * i_q;
  qw = v * std::sin(theta) * i_d - v * std::cos(theta) * i_q;
}

}  // namespace

InverterState equilibrium_state(const InverterParams& p, double p_load, double q_load) {
  p.validate();
  if (std::abs(p.omega_set - p.omega_0) > 1e-9 * p.omega_0)
    throw std::invalid_argument("equilibrium requires omega_set == omega_0 (theta cannot be stationary)");

  InverterState s;
  s.omega = p.omega_0;
  s.p = p_load;

  if (p_load == 0.0 && q_load == 0.0 && p.v_set == p.v_bus) {
    s.theta = 0.0;
    s.v = p.v_set;
    s.i_d = s.i_q = 0.0;
    s.q = 0.0;
    return s;  // derivative is exactly zero here
  }

  // Seed on the stable power-angle branch: P(theta) increases as theta falls
  // below -atan(X/R), so bisect there with V held near its set point.
  const double x = p.omega_0 * p.l;
  double v = p.v_set;
  double theta_hi = -std::atan2(x, p.r);
  double lo = -3.14159265358979323846;
  double id, iq, pw, qw;
  for (int outer = 0; outer < 8; ++outer) {
    double a = lo, b = theta_hi;
    circuit_at(a, v, p, id, iq, pw, qw);
    double pa = pw;
    circuit_at(b, v, p, id, iq, pw, qw);
    double pb = pw;
    if ((p_load - pa) * (p_load - pb) > 0.0 && std::abs(p_load) > 1e-15) {
      // Loading beyond the transfer capability of the branch.
      if (p_load > std::max(pa, pb))
        throw std::runtime_error("equilibrium_state: no equilibrium for this loading");
    }
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (a + b);
      circuit_at(mid, v, p, id, iq, pw, qw);
      if ((pw - p_load) * (pa - p_load) <= 0.0) b = mid;
      else { a = mid; pa = pw; }
    }
    s.theta = 0.5 * (a + b);
    circuit_at(s.theta, v, p, id, iq, pw, qw);
    double v_new = p.v_set + p.d_q * (qw - q_load);
    if (std::abs(v_new - v) < 1e-14) { v = v_new; break; }
    v = v_new;
  }
  circuit_at(s.theta, v, p, id, iq, pw, qw);
  s.v = v;
  s.i_d = id;
  s.i_q = iq;
  s.q = qw;
  s.p = pw;

  // Newton polish on the full seven-state residual.
  auto eval = [&](const std::array<double, 7>& a) {
    return state_derivative(InverterState::from_array(a), p, p_load, q_load).as_array();
  };
  std::array<double, 7> z = s.as_array();
  double best = residual_norm(InverterState::from_array(z), p, p_load, q_load);
  for (int it = 0; it < 100 && best > 1e-13; ++it) {
    Eigen::Matrix<double, 7, 7> jac;
    auto f0 = eval(z);
    for (int j = 0; j < 7; ++j) {
      double h = 1e-7 * std::max(1.0, std::abs(z[j]));
      auto zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      auto fp = eval(zp), fm = eval(zm);
      for (int i = 0; i < 7; ++i) jac(i, j) = (fp[i] - fm[i]) / (2 * h);
    }
    Eigen::Matrix<double, 7, 1> rhs;
    for (int i = 0; i < 7; ++i) rhs(i) = -f0[i];
    Eigen::Matrix<double, 7, 1> step = jac.fullPivLu().solve(rhs);
    double lambda = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      auto zt = z;
      for (int i = 0; i < 7; ++i) zt[i] += lambda * step(i);
      double rn = residual_norm(InverterState::from_array(zt), p, p_load, q_load);
      if (rn < best) {
        z = zt;
        best = rn;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) break;
  }
  if (best > 1e-9)
    throw std::runtime_error("equilibrium_state: Newton did not converge (residual " +
                             std::to_string(best) + ")");
  return InverterState::from_array(z);
}

FrequencyTrace simulate_load_step(const InverterState& s0, const InverterParams& p,
                                  double p_load_new, double q_load_new, const SimOptions& opts) {
  p.validate();
  if (!(opts.dt > 0)) throw std::invalid_argument("sim: dt must be > 0");
  const long n = std::lround(opts.duration / opts.dt);

  FrequencyTrace tr;
  tr.dt = opts.dt;
  tr.f_hz.reserve(n + 1);
  tr.f_hz.push_back(s0.omega / kTwoPi);

  auto rhs = [&](const InverterState& s) { return state_derivative(s, p, p_load_new, q_load_new); };
  auto axpy = [](const InverterState& s, double h, const InverterState& d) {
    InverterState o;
    o.p = s.p + h * d.p;
    o.q = s.q + h * d.q;
    o.theta = s.theta + h * d.theta;
    o.omega = s.omega + h * d.omega;
    o.v = s.v + h * d.v;
    o.i_d = s.i_d + h * d.i_d;
    o.i_q = s.i_q + h * d.i_q;
    return o;
  };

  InverterState s = s0;
  const double dt = opts.dt;
  for (long i = 0; i < n; ++i) {
    InverterState k1 = rhs(s);
    InverterState k2 = rhs(axpy(s, 0.5 * dt, k1));
    InverterState k3 = rhs(axpy(s, 0.5 * dt, k2));
    InverterState k4 = rhs(axpy(s, dt, k3));
    InverterState sum = k1;
    sum.p += 2 * k2.p + 2 * k3.p + k4.p;
    sum.q += 2 * k2.q + 2 * k3.q + k4.q;
    sum.theta += 2 * k2.theta + 2 * k3.theta + k4.theta;
    sum.omega += 2 * k2.omega + 2 * k3.omega + k4.omega;
    sum.v += 2 * k2.v + 2 * k3.v + k4.v;
    sum.i_d += 2 * k2.i_d + 2 * k3.i_d + k4.i_d;
    sum.i_q += 2 * k2.i_q + 2 * k3.i_q + k4.i_q;
    s = axpy(s, dt / 6.0, sum);

    bool finite = true;
    for (double v : s.as_array())
      if (!std::isfinite(v)) finite = false;
    if (!finite || std::abs(s.omega - p.omega_0) > 0.1 * p.omega_0) {
      tr.stable = false;
      tr.end_state = s;
      break;
    }
    tr.f_hz.push_back(s.omega / kTwoPi);
    tr.end_state = s;
  }
  if (tr.f_hz.empty()) throw std::logic_error("simulate_load_step: empty trace");
  auto [fn, tn] = frequency_nadir(tr);
  tr.f_nadir = fn;
  tr.t_nadir = tn;
  return tr;
}

std::pair<double, double> frequency_nadir(const FrequencyTrace& trace) {
  if (trace.f_hz.empty()) throw std::invalid_argument("frequency_nadir: empty trace");
  size_t arg = 0;
  for (size_t i = 1; i < trace.f_hz.size(); ++i)
    if (trace.f_hz[i] < trace.f_hz[arg]) arg = i;  // strict: ties keep the earliest
  return {trace.f_hz[arg], trace.t_start + static_cast<double>(arg) * trace.dt};
}

double delta_f_meas(const FrequencyTrace& trace, double f0_hz) {
  return std::max(0.0, f0_hz - trace.f_nadir);
}

}  // namespace mgres::sim
