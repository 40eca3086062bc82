#pragma once

#include <array>
#include <vector>

namespace mgres::sim {

/// Aggregate droop-controlled grid-forming inverter parameters. Powers are
/// per-unit on the system base; d_p is specified per watt and converted with
/// power_base_w when the droop term is evaluated, d_q acts on per-unit
/// reactive power directly.
struct InverterParams {
  double omega_c = 2.0 * 3.14159265358979323846 * 10.0;  // low-pass cut-off, rad/s
  double d_p = 1e-5;        // P-omega droop gain, (rad/s) per W
  double d_q = 1e-5;        // Q-V droop gain, pu-V per pu-var
  double omega_set = 2.0 * 3.14159265358979323846 * 60.0;
  double omega_0 = 2.0 * 3.14159265358979323846 * 60.0;
  double v_set = 1.0;   // pu
  double v_bus = 1.0;   // pu, held constant over a stage transient
  double r = 1.5;       // aggregate resistance, pu
  double l = 5e-4;      // aggregate inductance, pu*s
  double power_base_w = 1e6;

  double d_p_pu() const { return d_p * power_base_w; }
  void validate() const;  // throws std::invalid_argument
};

/// Seven-state vector (P, Q, theta, omega, V, I_d, I_q).
struct InverterState {
  double p = 0.0;      // filtered active output, pu
  double q = 0.0;      // filtered reactive output, pu
  double theta = 0.0;  // rad
  double omega = 0.0;  // rad/s
  double v = 1.0;      // pu
  double i_d = 0.0;    // pu
  double i_q = 0.0;    // pu

  std::array<double, 7> as_array() const { return {p, q, theta, omega, v, i_d, i_q}; }
  static InverterState from_array(const std::array<double, 7>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
};

struct SimOptions {
  double dt = 1e-4;       // s
  double duration = 3.0;  // s per stage
};

struct FrequencyTrace {
  double dt = 1e-4;
  double t_start = 0.0;            // global offset of the first sample
  std::vector<double> f_hz;        // one sample per step, t = t_start + (i+1)*dt
  double f_nadir = 0.0;
  double t_nadir = 0.0;
  bool stable = true;
  InverterState end_state;
};

/// The seven right-hand sides of the droop-inverter model.
InverterState state_derivative(const InverterState& s, const InverterParams& p,
                               double p_load, double q_load);

/// Algebraic equilibrium for the given loading: residual of state_derivative
/// at the returned state <= 1e-9. Requires omega_set == omega_0. Throws
/// std::invalid_argument on bad params, std::runtime_error on non-convergence
/// (the caller treats the stage as dynamically unrestorable).
InverterState equilibrium_state(const InverterParams& p, double p_load, double q_load);

/// Fixed-step classic 4th-order integration from s0 under the new loading.
/// The stability flag clears if any state leaves its bounds (omega outside
/// [0.9, 1.1]*omega_0) or becomes non-finite; the trace is then truncated.
FrequencyTrace simulate_load_step(const InverterState& s0, const InverterParams& p,
                                  double p_load_new, double q_load_new, const SimOptions& opts);

/// Minimum sample and its time; ties resolved to the earliest.
std::pair<double, double> frequency_nadir(const FrequencyTrace& trace);

/// f_0 - f_nadir, floored at zero.
double delta_f_meas(const FrequencyTrace& trace, double f0_hz);

}  // namespace mgres::sim
