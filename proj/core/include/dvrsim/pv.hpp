#pragma once

// Ideal single-diode PV array and perturb-and-observe tracking.

#include <cstddef>

namespace dvrsim::pv {

inline constexpr double kBoltzmann = 1.380649e-23;      // J/K
inline constexpr double kElectronCharge = 1.602176634e-19;  // C

struct PvModel {
  double i_pv = 30.0;     // photocurrent at 1000 W/m^2, A
  double i_0 = 3e-9;      // diode saturation current, A
  double alpha = 1.3;     // effective ideality factor
  double k = kBoltzmann;
  double t_cell = 298.15;  // K
  double q_e = kElectronCharge;
  double n_cell = 600.0;  // series cells
  double g = 1000.0;      // irradiance, W/m^2

  // k T / q * n_cell
  double thermal_voltage() const { return k * t_cell / q_e * n_cell; }
  double photocurrent() const { return i_pv * (g / 1000.0); }
  double open_circuit_voltage() const;
  void validate() const;
};

// I = i_pv (g/1000) - i_0 (exp(V / (alpha v_t)) - 1). Throws ValidationError
// for v < 0 and NumericalError beyond 50 alpha v_t (exponent guard).
double pv_current(const PvModel& m, double v);

struct MppPoint {
  double v = 0.0;
  double p = 0.0;
};

// Uniform scan of [0, v_oc] with n_points >= 1000 samples; returns the
// best grid point. Used as a reference, not by the tracker.
MppPoint mpp_bruteforce(const PvModel& m, std::size_t n_points);

class PerturbObserve {
 public:
  PerturbObserve(double v_ref, double step, double v_max);

  // One tracking cycle with the measured operating point; returns the new
  // voltage reference.
  double step(double v_meas, double i_meas);

  double v_ref() const { return v_ref_; }
  double step_size() const { return step_; }
  double prev_v() const { return prev_v_; }
  double prev_p() const { return prev_p_; }
  int direction() const { return direction_; }

 private:
  double v_ref_;
  double step_;
  double v_max_;
  double prev_v_ = 0.0;
  double prev_p_ = 0.0;
  int direction_ = 1;
};

}  // namespace dvrsim::pv
