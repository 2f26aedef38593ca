#include "dvrsim/wind.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "dvrsim/error.hpp"

namespace dvrsim::wind {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;
using Vec4 = std::array<double, 4>;

// Gaussian elimination with partial pivoting.
Vec4 solve4(Mat4 a, Vec4 b) {
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-300) throw NumericalError("singular machine system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec4 x{};
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 4; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

double axis_det(const MachineParams& p) {
  const double ls = p.l_ls + p.l_m;
  const double lr = p.l_lr + p.l_m;
  return ls * lr - p.l_m * p.l_m;
}

// d(lambda)/dt = M lambda + [v_ds, v_qs, 0, 0]
Mat4 state_matrix(const MachineParams& p, double omega_sync, double omega_r) {
  const double det = axis_det(p);
  if (!(det > 1e-15)) throw NumericalError("singular inductance matrix");
  const double ls = p.l_ls + p.l_m;
  const double lr = p.l_lr + p.l_m;
  const double ws = omega_sync;
  const double wsl = omega_sync - omega_r;
  const double a = p.r_s * lr / det;
  const double b = p.r_s * p.l_m / det;
  const double c = p.r_r * p.l_m / det;
  const double d = p.r_r * ls / det;
  Mat4 m{};
  m[0] = {-a, -ws, b, 0.0};
  m[1] = {ws, -a, 0.0, b};
  m[2] = {c, 0.0, -d, -wsl};
  m[3] = {0.0, c, wsl, -d};
  return m;
}

Vec4 to_vec(const FluxLinkages& f) { return {f.ds, f.qs, f.dr, f.qr}; }
FluxLinkages to_flux(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

}  // namespace

void AeroParams::validate() const {
  if (!(rho > 0.0)) throw ValidationError("air density must be positive");
  if (!(radius > 0.0)) throw ValidationError("blade radius must be positive");
  if (!(cp >= 0.0 && cp < kBetzLimit)) throw ValidationError("cp must be in [0, 16/27)");
  if (!(v_w >= 0.0)) throw ValidationError("wind speed must be non-negative");
}

WindPower wind_power(const AeroParams& p) {
  p.validate();
  WindPower out;
  out.p_w = 0.5 * kPi * p.rho * p.radius * p.radius * p.v_w * p.v_w * p.v_w;
  out.p_m = p.cp * out.p_w;
  return out;
}

void MachineParams::validate() const {
  if (!(r_s >= 0.0) || !(r_r > 0.0)) throw ValidationError("machine resistances must be r_s >= 0, r_r > 0");
  if (!(l_ls >= 0.0) || !(l_lr >= 0.0)) throw ValidationError("leakage inductances must be non-negative");
  if (!(l_m > 0.0)) throw ValidationError("magnetizing inductance must be positive");
  if (pole_pairs < 1) throw ValidationError("pole pairs must be at least 1");
  if (!(j_r > 0.0)) throw ValidationError("rotor inertia must be positive");
}

DqCurrents flux_to_currents(const InductionMachineState& m) {
  const auto& p = m.params;
  const double det = axis_det(p);
  if (!(det > 1e-15)) throw NumericalError("singular inductance matrix");
  const double ls = p.l_ls + p.l_m;
  const double lr = p.l_lr + p.l_m;
  const auto& f = m.lambda;
  return {(lr * f.ds - p.l_m * f.dr) / det, (lr * f.qs - p.l_m * f.qr) / det,
          (ls * f.dr - p.l_m * f.ds) / det, (ls * f.qr - p.l_m * f.qs) / det};
}

FluxLinkages currents_to_flux(const MachineParams& p, const DqCurrents& i) {
  const double ls = p.l_ls + p.l_m;
  const double lr = p.l_lr + p.l_m;
  return {ls * i.ds + p.l_m * i.dr, ls * i.qs + p.l_m * i.qr, p.l_m * i.ds + lr * i.dr,
          p.l_m * i.qs + lr * i.qr};
}

double electromagnetic_torque(const InductionMachineState& m, const DqCurrents& i) {
  return 1.5 * m.params.pole_pairs * (m.lambda.ds * i.qs - m.lambda.qs * i.ds);
}

MachineStepResult machine_step(InductionMachineState& m, double v_ds, double v_qs, double t_g,
                               double omega_sync, double dt) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const double t_em0 = electromagnetic_torque(m, flux_to_currents(m));

  const Mat4 a = state_matrix(m.params, omega_sync, m.omega_r);
  const Vec4 x0 = to_vec(m.lambda);
  const double h2 = 0.5 * dt;
  Mat4 lhs{};
  Vec4 rhs{};
  for (int r = 0; r < 4; ++r) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) {
      lhs[r][c] = (r == c ? 1.0 : 0.0) - h2 * a[r][c];
      s += ((r == c ? 1.0 : 0.0) + h2 * a[r][c]) * x0[c];
    }
    rhs[r] = s;
  }
  rhs[0] += dt * v_ds;
  rhs[1] += dt * v_qs;
  m.lambda = to_flux(solve4(lhs, rhs));

  MachineStepResult out;
  out.currents = flux_to_currents(m);
  out.t_em = electromagnetic_torque(m, out.currents);
  m.omega_r += h2 / m.params.j_r * ((t_g - t_em0) + (t_g - out.t_em));
  return out;
}

FluxLinkages steady_state_flux(const MachineParams& p, double v_ds, double v_qs,
                               double omega_sync, double omega_r) {
  const Mat4 a = state_matrix(p, omega_sync, omega_r);
  return to_flux(solve4(a, {-v_ds, -v_qs, 0.0, 0.0}));
}

double turbine_torque(const AeroParams& aero, double omega_r, int pole_pairs) {
  const double w_mech = std::max(omega_r / pole_pairs, 1.0);
  return wind_power(aero).p_m / w_mech;
}

OperatingPoint solve_operating_point(const MachineParams& p, const AeroParams& aero,
                                     double v_ds, double v_qs, double omega_sync) {
  p.validate();
  auto torque_at = [&](double w) {
    InductionMachineState m{p, steady_state_flux(p, v_ds, v_qs, omega_sync, w), w};
    return electromagnetic_torque(m, flux_to_currents(m));
  };
  auto residual = [&](double w) { return torque_at(w) - turbine_torque(aero, w, p.pole_pairs); };

  // Walk up from synchronous speed until the generator torque catches the
  // turbine torque; the first crossing is on the stable branch.
  double lo = omega_sync;
  double hi = omega_sync;
  if (residual(lo) < 0.0) {
    const double step = 1e-3 * omega_sync;
    bool found = false;
    double prev_t = torque_at(lo);
    for (int k = 1; k <= 500; ++k) {
      const double w = omega_sync + k * step;
      if (residual(w) >= 0.0) {
        lo = w - step;
        hi = w;
        found = true;
        break;
      }
      const double t = torque_at(w);
      if (t < prev_t) break;  // past pull-out
      prev_t = t;
    }
    if (!found) {
      throw NumericalError("turbine torque exceeds the generator pull-out torque");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * omega_sync; ++it) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid) < 0.0 ? lo : hi) = mid;
    }
  }
  OperatingPoint op;
  op.omega_r = 0.5 * (lo + hi);
  op.lambda = steady_state_flux(p, v_ds, v_qs, omega_sync, op.omega_r);
  InductionMachineState m{p, op.lambda, op.omega_r};
  op.currents = flux_to_currents(m);
  op.t_em = electromagnetic_torque(m, op.currents);
  op.slip = (omega_sync - op.omega_r) / omega_sync;
  return op;
}

WindTurbine::WindTurbine(const AeroParams& aero, const MachineParams& machine,
                         double omega_sync)
    : aero_(aero), omega_sync_(omega_sync) {
  aero_.validate();
  machine.validate();
  state_.params = machine;
  state_.omega_r = omega_sync;
}

void WindTurbine::set_operating_point(const OperatingPoint& op) {
  state_.lambda = op.lambda;
  state_.omega_r = op.omega_r;
  t_em_ = op.t_em;
  t_g_ = turbine_torque(aero_, op.omega_r, state_.params.pole_pairs);
}

DqCurrents WindTurbine::step(double v_ds, double v_qs, double dt) {
  t_g_ = turbine_torque(aero_, state_.omega_r, state_.params.pole_pairs);
  const MachineStepResult r = machine_step(state_, v_ds, v_qs, t_g_, omega_sync_, dt);
  t_em_ = r.t_em;
  return r.currents;
}

}  // namespace dvrsim::wind
