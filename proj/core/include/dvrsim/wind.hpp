#pragma once

// Fixed-speed induction-generator wind turbine.
//
// Electrical model: synchronous-frame dq flux equations (q lagging d,
// amplitude-invariant scaling, motor convention for currents).
//   d(lambda_ds)/dt = v_ds - r_s i_ds - w_s lambda_qs
//   d(lambda_qs)/dt = v_qs - r_s i_qs + w_s lambda_ds
//   d(lambda_dr)/dt =      - r_r i_dr - (w_s - w_r) lambda_qr
//   d(lambda_qr)/dt =      - r_r i_qr + (w_s - w_r) lambda_dr
// Torque t_em = 3/2 p (lambda_ds i_qs - lambda_qs i_ds) is positive when the
// machine brakes the shaft (generating). Shaft: j_r dw_r/dt = t_g - t_em with
// w_r the electrical rotor speed and j_r the inertia referred to it.

#include "dvrsim/signals.hpp"

namespace dvrsim::wind {

inline constexpr double kBetzLimit = 16.0 / 27.0;

struct AeroParams {
  double rho = 1.225;  // kg/m^3
  double radius = 5.4;  // m
  double cp = 0.4;
  double v_w = 10.0;  // m/s

  void validate() const;
};

struct WindPower {
  double p_w = 0.0;  // power in the swept wind column, W
  double p_m = 0.0;  // mechanical power captured, W
};

WindPower wind_power(const AeroParams& p);

struct MachineParams {
  double r_s = 0.0533;     // ohm
  double r_r = 0.064;      // ohm
  double l_ls = 1.02e-3;   // H
  double l_lr = 1.02e-3;   // H
  double l_m = 50.9e-3;    // H
  int pole_pairs = 2;
  double j_r = 4.0;        // kg m^2 referred to electrical speed

  void validate() const;
};

struct FluxLinkages {
  double ds = 0.0;
  double qs = 0.0;
  double dr = 0.0;
  double qr = 0.0;
};

struct DqCurrents {
  double ds = 0.0;
  double qs = 0.0;
  double dr = 0.0;
  double qr = 0.0;
};

struct InductionMachineState {
  MachineParams params;
  FluxLinkages lambda;
  double omega_r = 0.0;  // electrical rad/s
};

// Inverts the flux-current relation as two independent 2x2 solves.
// Throws NumericalError when a per-axis determinant is <= 1e-15.
DqCurrents flux_to_currents(const InductionMachineState& m);
FluxLinkages currents_to_flux(const MachineParams& p, const DqCurrents& i);

double electromagnetic_torque(const InductionMachineState& m, const DqCurrents& i);

struct MachineStepResult {
  DqCurrents currents;  // at the end of the step
  double t_em = 0.0;
};

// One trapezoidal step. The stator voltage (dq) and t_g are held over the
// step; the flux system is advanced with the start-of-step rotor speed.
MachineStepResult machine_step(InductionMachineState& m, double v_ds, double v_qs, double t_g,
                               double omega_sync, double dt);

// Flux linkages of the electrical steady state at fixed rotor speed.
FluxLinkages steady_state_flux(const MachineParams& p, double v_ds, double v_qs,
                               double omega_sync, double omega_r);

// Turbine shaft torque p_m / w_mech for the electrical rotor speed.
double turbine_torque(const AeroParams& aero, double omega_r, int pole_pairs);

struct OperatingPoint {
  double omega_r = 0.0;
  FluxLinkages lambda;
  DqCurrents currents;
  double t_em = 0.0;
  double slip = 0.0;
};

// Generating equilibrium t_em(w_r) = turbine_torque(w_r) on the stable side
// of the torque-slip curve. Throws NumericalError if the turbine torque
// exceeds the pull-out torque at this voltage.
OperatingPoint solve_operating_point(const MachineParams& p, const AeroParams& aero,
                                     double v_ds, double v_qs, double omega_sync);

// Turbine + generator as driven by the engine.
class WindTurbine {
 public:
  WindTurbine(const AeroParams& aero, const MachineParams& machine, double omega_sync);

  void set_operating_point(const OperatingPoint& op);
  // Advance one step; returns stator currents (into the machine) in dq.
  DqCurrents step(double v_ds, double v_qs, double dt);

  const InductionMachineState& state() const { return state_; }
  double t_em() const { return t_em_; }
  double t_g() const { return t_g_; }
  double omega_r() const { return state_.omega_r; }

 private:
  AeroParams aero_;
  InductionMachineState state_;
  double omega_sync_;
  double t_em_ = 0.0;
  double t_g_ = 0.0;
};

}  // namespace dvrsim::wind
