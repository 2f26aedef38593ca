#include "oracles.hpp"

#include <cmath>

namespace dvrsim::oracle {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Dq park(double a, double b, double c, double theta) {
  const double w = 2.0 * kPi / 3.0;
  Dq out;
  out.d = 2.0 / 3.0 * (a * std::cos(theta) + b * std::cos(theta - w) + c * std::cos(theta + w));
  out.q = 2.0 / 3.0 * (a * std::sin(theta) + b * std::sin(theta - w) + c * std::sin(theta + w));
  return out;
}

double rl_peak_current(double e_peak, double r, double l, double omega) {
  return e_peak / std::hypot(r, omega * l);
}

std::complex<double> lc_transfer(double l, double r, double c, double omega) {
  const std::complex<double> j(0.0, 1.0);
  // 1 / (1 - w^2 l c + j w r c)
  return 1.0 / (1.0 - omega * omega * l * c + j * omega * r * c);
}

double diode_current(const pv::PvModel& m, double v) {
  const double vt = m.k * m.t_cell / m.q_e * m.n_cell;
  return m.i_pv * m.g / 1000.0 - m.i_0 * (std::exp(v / (m.alpha * vt)) - 1.0);
}

double pv_voc_bisection(const pv::PvModel& m) {
  const double vt = m.k * m.t_cell / m.q_e * m.n_cell;
  double lo = 0.0, hi = 50.0 * m.alpha * vt;
  if (diode_current(m, lo) <= 0.0) return 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (diode_current(m, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Mpp pv_mpp_golden(const pv::PvModel& m) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = pv_voc_bisection(m);
  auto p = [&](double v) { return v * diode_current(m, v); };
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = p(x1);
  double f2 = p(x2);
  for (int i = 0; i < 200 && b - a > 1e-12 * (1.0 + b); ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = p(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = p(x1);
    }
  }
  const double v = 0.5 * (a + b);
  return {v, p(v)};
}

MachinePhasor machine_phasor(const wind::MachineParams& p, double v_peak, double omega_s,
                             double slip) {
  const std::complex<double> j(0.0, 1.0);
  const std::complex<double> z_s = p.r_s + j * omega_s * p.l_ls;
  const std::complex<double> z_m = j * omega_s * p.l_m;
  const std::complex<double> z_r = p.r_r / slip + j * omega_s * p.l_lr;
  const std::complex<double> i_s = v_peak / (z_s + z_m * z_r / (z_m + z_r));
  const std::complex<double> i_r = i_s * z_m / (z_m + z_r);
  MachinePhasor out;
  out.i_s = i_s;
  out.air_gap_power = 1.5 * std::norm(i_r) * p.r_r / slip;
  // Motor torque = P_ag / w_mech_sync; the model reports the braking sign.
  out.braking_torque = -out.air_gap_power * p.pole_pairs / omega_s;
  return out;
}

}  // namespace dvrsim::oracle
