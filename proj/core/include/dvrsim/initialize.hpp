#pragma once

// Circuit values derived from a scenario and the sinusoidal steady state
// used to start a run without a start-up transient.

#include <complex>
#include <cstddef>

#include "dvrsim/network.hpp"
#include "dvrsim/scenario.hpp"
#include "dvrsim/wind.hpp"

namespace dvrsim {

// Everything referred to the load-bus (secondary) side; peak phase values.
struct Circuit {
  double omega = 0.0;
  double e_rated = 0.0;  // rated source EMF
  double r_th = 0.0;
  double l_th = 0.0;
  network::LoadRating load;
  double v_base_peak = 0.0;
  double i_limit_peak = 0.0;  // bypass threshold
  std::size_t window = 0;     // samples per period
  bool dvr_active = false;    // present and enabled
};

Circuit derive_circuit(const Scenario& s);

using Phasor = std::complex<double>;

// The PV inverter holds its power down to 1/kPvCurrentCap of the base bus
// voltage; below that its current stays at the capped value.
inline constexpr double kPvCurrentCap = 1.5;

// Phasor x means x_k(theta) = Re(x * exp(j (theta - 2 pi k / 3))).
struct SteadyState {
  double e_peak = 0.0;  // EMF after any flat-bus scaling
  double u = 0.0;       // DVR modulation amplitude
  Phasor v_bus;
  Phasor i_line;  // source to load bus
  Phasor v_dvr;
  Phasor v_inv;
  Phasor v_c;
  Phasor i_filter_l;
  Phasor i_filter_c;
  Phasor i_wind;  // injected into the bus
  Phasor i_pv;    // injected into the bus
  wind::OperatingPoint wind;
  double v_pv = 0.0;
  double p_pv = 0.0;
};

// Throws NumericalError when the load flow does not converge or the turbine
// cannot find a stable operating point.
SteadyState solve_steady_state(const Scenario& s, const Circuit& c);

// Instantaneous value of phase k of a phasor at angle theta.
double phase_value(Phasor x, double theta, int k);

}  // namespace dvrsim
