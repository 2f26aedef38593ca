#include "dvrsim/dvr.hpp"

#include <algorithm>
#include <cmath>

#include "dvrsim/error.hpp"

namespace dvrsim::dvr {

double vsi_output(double duty, double v_dc) { return duty * 0.5 * v_dc; }

LcFilter::LcFilter(double l, double r, double c, double dt) : l_(l), r_(r), c_(c) {
  if (!(l > 0.0) || !(c > 0.0) || !(r >= 0.0)) {
    throw ValidationError("filter needs l > 0, c > 0, r >= 0");
  }
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  g_l_ = 1.0 / (r + 2.0 * l / dt);
  k_l_ = 2.0 * l / dt - r;
  g_c_ = 2.0 * c / dt;
}

// Inductor: i_l' = g_l (v_inv' - v_c') + h_l, h_l = g_l (v_inv - v_c + k_l i_l)
// Capacitor: i_c' = g_c v_c' - h_c,         h_c = g_c v_c + i_c
// Node:      i_l' = i_c' + i_out'
LcFilter::Thevenin LcFilter::thevenin(int phase, double v_inv) const {
  const PhaseState& s = st_[phase];
  const double h_l = g_l_ * (s.v_inv - s.v_c + k_l_ * s.i_l);
  const double h_c = g_c_ * s.v_c + s.i_c;
  const double z = 1.0 / (g_l_ + g_c_);
  return {(g_l_ * v_inv + h_l + h_c) * z, z};
}

double LcFilter::commit(int phase, double v_inv, double i_out) {
  const Thevenin th = thevenin(phase, v_inv);
  PhaseState& s = st_[phase];
  const double v_c = th.v_open - th.z * i_out;
  const double i_l = g_l_ * (v_inv - v_c) + g_l_ * (s.v_inv - s.v_c + k_l_ * s.i_l);
  s.i_c = i_l - i_out;
  s.i_l = i_l;
  s.v_c = v_c;
  s.v_inv = v_inv;
  return v_c;
}

void LcFilter::set_state(int phase, double i_l, double v_c, double i_c, double v_inv) {
  st_[phase] = {i_l, v_c, i_c, v_inv};
}

double inject(double v_c, double ratio) { return ratio * v_c; }
double filter_side_current(double i_line, double ratio) { return ratio * i_line; }

PiController::PiController(double kp, double ki, double out_min, double out_max)
    : kp_(kp), ki_(ki), out_min_(out_min), out_max_(out_max) {
  if (!(kp >= 0.0) || !(ki >= 0.0)) throw ValidationError("PI gains must be non-negative");
  if (!(out_min < out_max)) throw ValidationError("PI output range is empty");
}

double PiController::update(double error, double dt) {
  const double raw = kp_ * error + integ_;
  const bool high = raw >= out_max_ && error > 0.0;
  const bool low = raw <= out_min_ && error < 0.0;
  if (!high && !low) {
    integ_ = std::clamp(integ_ + ki_ * error * dt, out_min_, out_max_);
  }
  return std::clamp(kp_ * error + integ_, out_min_, out_max_);
}

void PiController::reset(double integ) { integ_ = std::clamp(integ, out_min_, out_max_); }

BypassSwitch::BypassSwitch(double i_limit, double rearm_fraction, std::size_t rearm_samples)
    : i_limit_(i_limit), rearm_fraction_(rearm_fraction), rearm_samples_(rearm_samples) {
  if (!(i_limit > 0.0)) throw ValidationError("bypass current limit must be positive");
  if (!(rearm_fraction > 0.0 && rearm_fraction <= 1.0)) {
    throw ValidationError("bypass re-arm fraction must be in (0, 1]");
  }
}

bool BypassSwitch::check(const ThreePhaseSample& i) {
  const double peak = std::max({std::abs(i.a), std::abs(i.b), std::abs(i.c)});
  if (!engaged_) {
    if (peak > i_limit_) {
      engaged_ = true;
      quiet_ = 0;
    }
    return engaged_;
  }
  quiet_ = peak < rearm_fraction_ * i_limit_ ? quiet_ + 1 : 0;
  if (quiet_ >= rearm_samples_) {
    engaged_ = false;
    quiet_ = 0;
  }
  return engaged_;
}

Controller::Controller(std::size_t window, double v_base_peak, PiController pi)
    : extractor_(window), pi_(pi), v_base_peak_(v_base_peak) {
  if (!(v_base_peak > 0.0)) throw ValidationError("controller voltage base must be positive");
}

void Controller::observe(const ThreePhaseSample& v_load, double theta_meas) {
  magnitude_pu_ = extractor_.push(v_load, theta_meas) / v_base_peak_;
}

double Controller::update(const ThreePhaseSample& v_load, double theta_meas, double dt) {
  observe(v_load, theta_meas);
  amplitude_ = pi_.update(1.0 - magnitude_pu_, dt);
  return amplitude_;
}

ThreePhaseSample Controller::duty(double theta) const {
  return signals::balanced(amplitude_, theta);
}

ThreePhaseSample control_step(Controller& ctl, const ThreePhaseSample& v_load, double theta,
                              double dt) {
  ctl.update(v_load, theta, dt);
  return ctl.duty(theta);
}

}  // namespace dvrsim::dvr
