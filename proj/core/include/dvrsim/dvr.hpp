#pragma once

// Dynamic voltage restorer: averaged VSI, LC output filter, series injection
// transformer, bypass switch and the positive-sequence magnitude controller.

#include <array>
#include <cstddef>

#include "dvrsim/signals.hpp"

namespace dvrsim::dvr {

// Averaged sinusoidal-PWM leg, linear region: v = duty * v_dc / 2.
double vsi_output(double duty, double v_dc);

// Per-phase L-C filter between the VSI and the injection transformer. The
// inductor (with series r) feeds the capacitor node; the transformer draws
// i_out from it. Trapezoidal discretization.
class LcFilter {
 public:
  LcFilter(double l, double r, double c, double dt);

  // Capacitor voltage as an affine function of the (unknown) output current
  // at the end of the step: v_c = v_open - z * i_out.
  struct Thevenin {
    double v_open = 0.0;
    double z = 0.0;
  };
  Thevenin thevenin(int phase, double v_inv) const;

  // Advance one phase with the actual output current; returns v_c.
  double commit(int phase, double v_inv, double i_out);
  // thevenin() + commit() in one call.
  double step(int phase, double v_inv, double i_out) { return commit(phase, v_inv, i_out); }
  // Blocked inverter behind a closed bypass: the inductor current
  // commutates into the DC link and the shorted capacitor discharges.
  void discharge(int phase) { st_[phase] = {}; }

  void set_state(int phase, double i_l, double v_c, double i_c, double v_inv);

  double l() const { return l_; }
  double r() const { return r_; }
  double c() const { return c_; }
  double inductor_current(int phase) const { return st_[phase].i_l; }
  double capacitor_voltage(int phase) const { return st_[phase].v_c; }

 private:
  struct PhaseState {
    double i_l = 0.0;
    double v_c = 0.0;
    double i_c = 0.0;
    double v_inv = 0.0;
  };

  double l_, r_, c_;
  double g_l_;   // 1 / (r + 2l/dt)
  double k_l_;   // 2l/dt - r
  double g_c_;   // 2c/dt
  std::array<PhaseState, 3> st_{};
};

// Ideal injection transformer: series voltage ratio * v_c; the filter-side
// current is ratio * i_line (line current = filter current / ratio).
double inject(double v_c, double ratio);
double filter_side_current(double i_line, double ratio);

class PiController {
 public:
  PiController(double kp, double ki, double out_min, double out_max);

  // Saturated output. The integrator is clamped to the output range and does
  // not integrate further into a saturated limit.
  double update(double error, double dt);

  double integrator() const { return integ_; }
  void reset(double integ);
  double kp() const { return kp_; }
  double ki() const { return ki_; }
  double out_min() const { return out_min_; }
  double out_max() const { return out_max_; }

 private:
  double kp_, ki_, out_min_, out_max_;
  double integ_ = 0.0;
};

class BypassSwitch {
 public:
  // rearm_samples: length of the quiet interval (one fundamental cycle).
  BypassSwitch(double i_limit, double rearm_fraction, std::size_t rearm_samples);

  // Updates with the instantaneous line currents; returns the new state.
  bool check(const ThreePhaseSample& i_line);
  bool engaged() const { return engaged_; }
  double i_limit() const { return i_limit_; }

 private:
  double i_limit_;
  double rearm_fraction_;
  std::size_t rearm_samples_;
  std::size_t quiet_ = 0;
  bool engaged_ = false;
};

// Load-voltage magnitude loop: extract the fundamental positive-sequence
// magnitude, compare with 1 pu, PI, and emit an in-phase balanced duty set.
class Controller {
 public:
  Controller(std::size_t window, double v_base_peak, PiController pi);

  // Measures v_load (taken at angle theta_meas) and returns the modulation
  // amplitude for the next step.
  double update(const ThreePhaseSample& v_load, double theta_meas, double dt);
  // Measurement only; the PI state is held.
  void observe(const ThreePhaseSample& v_load, double theta_meas);

  // Balanced duty set of the current amplitude at angle theta.
  ThreePhaseSample duty(double theta) const;

  double amplitude() const { return amplitude_; }
  double magnitude_pu() const { return magnitude_pu_; }
  double error() const { return 1.0 - magnitude_pu_; }

  signals::SequenceExtractor& extractor() { return extractor_; }
  PiController& pi() { return pi_; }
  void set_amplitude(double u) { amplitude_ = u; }

 private:
  signals::SequenceExtractor extractor_;
  PiController pi_;
  double v_base_peak_;
  double magnitude_pu_ = 1.0;
  double amplitude_ = 0.0;
};

// control_step: one controller update followed by duty synthesis.
ThreePhaseSample control_step(Controller& ctl, const ThreePhaseSample& v_load, double theta,
                              double dt);

}  // namespace dvrsim::dvr
