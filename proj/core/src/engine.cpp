#include "dvrsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dvrsim/error.hpp"

namespace dvrsim {

namespace {

const Scenario& checked(const Scenario& s) {
  const auto violations = validate(s);
  if (!violations.empty()) {
    std::ostringstream os;
    os << "invalid scenario '" << s.name << "':";
    for (const auto& v : violations) os << "\n  " << v;
    throw ValidationError(os.str());
  }
  return s;
}

ThreePhaseSample at_angle(Phasor x, double theta, double t) {
  ThreePhaseSample out;
  for (int k = 0; k < 3; ++k) out[k] = phase_value(x, theta, k);
  out.t = t;
  return out;
}

double max_abs(const std::array<double, 3>& x) {
  return std::max({std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
}

}  // namespace

Simulation::Simulation(Scenario s)
    : s_(checked(s)),
      c_(derive_circuit(s_)),
      init_(solve_steady_state(s_, c_)),
      steps_(s_.steps()),
      source_(init_.e_peak, c_.r_th, c_.l_th, s_.solver.dt),
      load_(c_.load.r, c_.load.l, s_.solver.dt),
      trace_(trace::engine_columns()) {
  initialize();
  trace_.reserve(steps_ + 1);
  row_.resize(trace_.cols());
  record();
}

double Simulation::theta(std::size_t n) const { return std::fmod(c_.omega * t(n), kTwoPi); }

void Simulation::initialize() {
  const double dt = s_.solver.dt;
  const double omega = c_.omega;
  const Phasor j{0.0, 1.0};
  const SteadyState& st = init_;
  const Phasor v_grid = st.v_bus - st.v_dvr;
  const Phasor v_l = j * omega * c_.l_th * st.i_line;

  for (int k = 0; k < 3; ++k) {
    source_.branch(k).set_state(phase_value(st.i_line, 0.0, k),
                                phase_value(st.e_peak - v_grid, 0.0, k));
    if (load_.has_inductor()) {
      load_.set_state(k, phase_value(st.v_bus / (j * omega * c_.load.l), 0.0, k),
                      phase_value(st.v_bus, 0.0, k));
    }
    v_l_th_[k] = phase_value(v_l, 0.0, k);
  }

  if (c_.dvr_active) {
    const auto& d = s_.dvr;
    filter_.emplace(d.filter_l, d.filter_r, d.filter_c, dt);
    for (int k = 0; k < 3; ++k) {
      filter_->set_state(k, phase_value(st.i_filter_l, 0.0, k), phase_value(st.v_c, 0.0, k),
                         phase_value(st.i_filter_c, 0.0, k), phase_value(st.v_inv, 0.0, k));
    }
    ctl_.emplace(c_.window, c_.v_base_peak,
                 dvr::PiController(d.kp, d.ki, d.bidirectional ? -1.0 : 0.0, 1.0));
    ctl_->pi().reset(st.u);
    ctl_->set_amplitude(st.u);
    ctl_->extractor().prime(st.v_bus.real(), -st.v_bus.imag());
    bypass_.emplace(c_.i_limit_peak, d.rearm_fraction, c_.window);
  }

  if (s_.wind.present) {
    turbine_.emplace(s_.wind.aero, s_.wind.machine, omega);
    turbine_->set_operating_point(st.wind);
  }
  if (s_.pv.present) {
    const double v_oc = s_.pv.model.open_circuit_voltage();
    mppt_.emplace(st.v_pv, s_.pv.mppt_step_fraction * v_oc, v_oc);
    pv_sync_.emplace(c_.window);
    pv_sync_->prime(st.v_bus.real(), -st.v_bus.imag());
    v_pv_ = st.v_pv;
    p_pv_ = st.p_pv;
  }

  e_ = source_.emf(0.0, {1.0, 1.0, 1.0});
  v_load_ = at_angle(st.v_bus, 0.0, 0.0);
  v_dvr_ = at_angle(st.v_dvr, 0.0, 0.0);
  v_grid_ = at_angle(v_grid, 0.0, 0.0);
  i_line_ = at_angle(st.i_line, 0.0, 0.0);
  i_wind_ = at_angle(st.i_wind, 0.0, 0.0);
  i_pv_ = at_angle(st.i_pv, 0.0, 0.0);
  for (int k = 0; k < 3; ++k) {
    i_load_[k] = v_load_[k] / c_.load.r + load_.inductor_current(k);
  }

  std::array<double, 3> kvl{}, kcl{};
  for (int k = 0; k < 3; ++k) {
    kvl[k] = v_load_[k] - (e_[k] - c_.r_th * i_line_[k] - v_l_th_[k] + v_dvr_[k]);
    kcl[k] = i_line_[k] + i_wind_[k] + i_pv_[k] - i_load_[k];
  }
  kvl_ = max_abs(kvl);
  kcl_ = max_abs(kcl);
}

void Simulation::step() {
  if (done()) return;
  try {
    advance();
  } catch (const StepError&) {
    throw;
  } catch (const std::exception& e) {
    throw StepError(n_ + 1, t(n_ + 1), e.what());
  }
  ++n_;
  record();
}

void Simulation::advance() {
  const double h = s_.solver.dt;
  const std::size_t n1 = n_ + 1;
  const double th0 = theta(n_);
  const double th1 = theta(n1);
  const double t1 = t(n1);

  network::PhaseFactors mult;
  for (int k = 0; k < 3; ++k) {
    mult[k] = events::source_multiplier(s_.events, t1, static_cast<Phase>(k));
  }
  const ThreePhaseSample e1 = source_.emf(th1, mult);

  // Controller sees the bus as committed at the end of the previous step.
  const bool injecting = ctl_ && !bypass_->engaged();
  ThreePhaseSample duty;
  if (ctl_) {
    if (injecting) {
      ctl_->update(v_load_, th0, h);
      duty = ctl_->duty(th1);
    } else {
      ctl_->observe(v_load_, th0);
      ctl_->set_amplitude(0.0);  // inverter blocked
    }
  }
  std::array<double, 3> v_inv{}, v_open{}, r_series{};
  if (injecting) {
    const double ratio = s_.dvr.ratio;
    for (int k = 0; k < 3; ++k) {
      v_inv[k] = dvr::vsi_output(duty[k], s_.dvr.v_dc);
      const auto th = filter_->thevenin(k, v_inv[k]);
      v_open[k] = ratio * th.v_open;
      r_series[k] = ratio * ratio * th.z;
    }
  }

  ThreePhaseSample i_wind, i_pv;
  if (turbine_) {
    const DqFrame v = signals::abc_to_dq(v_load_, th0);
    const wind::DqCurrents i = turbine_->step(v.d, v.q, h);
    const ThreePhaseSample i_m = signals::dq_to_abc({i.ds, i.qs, th1});
    for (int k = 0; k < 3; ++k) i_wind[k] = -i_m[k];
  }
  if (mppt_) {
    if (n1 % c_.window == 0) {
      mppt_->step(v_pv_, pv::pv_current(s_.pv.model, v_pv_));
      v_pv_ = mppt_->v_ref();
      p_pv_ = v_pv_ * pv::pv_current(s_.pv.model, v_pv_);
    }
    // Unity power factor, synchronized to the averaged positive-sequence bus
    // phasor; current capped at the rated-voltage value times kPvCurrentCap.
    pv_sync_->push(v_load_, th0);
    const double d = pv_sync_->mean_d();
    const double q = pv_sync_->mean_q();
    const double mag = std::max(std::hypot(d, q), c_.v_base_peak / kPvCurrentCap);
    const double g = 2.0 * p_pv_ / (3.0 * mag * mag);
    i_pv = signals::dq_to_abc({g * d, g * q, th1});
  }

  std::array<double, 3> kvl{}, kcl{};
  const double two_l_h = 2.0 * c_.l_th / h;
  for (int k = 0; k < 3; ++k) {
    const auto path = network::series_path(source_.companion(k), e1[k], v_open[k], r_series[k]);
    const double i_inj = i_wind[k] + i_pv[k];
    const double v = network::bus_solve(path, load_.companion(k), i_inj);
    if (!std::isfinite(v)) throw NumericalError("non-finite load-bus voltage");
    const double i_line = path.current(v);
    const double v_dvr = injecting ? v_open[k] - r_series[k] * i_line : 0.0;
    const double v_grid = v - v_dvr;
    source_.branch(k).commit(e1[k] - v_grid);
    const double i_load = load_.commit(k, v);
    if (filter_) {
      if (injecting) {
        filter_->commit(k, v_inv[k], dvr::filter_side_current(i_line, s_.dvr.ratio));
      } else {
        filter_->discharge(k);
      }
    }

    // Independent check of the series-path voltage balance.
    const double v_l = two_l_h * (i_line - i_line_[k]) - v_l_th_[k];
    v_l_th_[k] = v_l;
    kvl[k] = v - (e1[k] - c_.r_th * i_line - v_l + v_dvr);
    kcl[k] = i_line + i_inj - i_load;

    e_[k] = e1[k];
    v_load_[k] = v;
    v_dvr_[k] = v_dvr;
    v_grid_[k] = v_grid;
    i_line_[k] = i_line;
    i_load_[k] = i_load;
  }
  e_.t = v_load_.t = v_dvr_.t = v_grid_.t = i_line_.t = i_load_.t = t1;
  i_wind_ = i_wind;
  i_pv_ = i_pv;
  kvl_ = max_abs(kvl);
  kcl_ = max_abs(kcl);

  if (bypass_) {
    const bool was_engaged = bypass_->engaged();
    // The inverter restarts from zero modulation once the switch re-arms.
    if (!bypass_->check(i_line_) && was_engaged) ctl_->pi().reset(0.0);
  }
}

void Simulation::record() {
  std::size_t c = 0;
  auto put = [&](double x) { row_[c++] = x; };
  auto put3 = [&](const ThreePhaseSample& x) {
    put(x.a);
    put(x.b);
    put(x.c);
  };
  put(t(n_));
  put3(v_grid_);
  put3(v_dvr_);
  put3(v_load_);
  put3(i_load_);
  for (int k = 0; k < 4; ++k) put(0.0);  // RMS channels, filled by finish()
  put(turbine_ ? turbine_->omega_r() : 0.0);
  put(turbine_ ? turbine_->t_em() : 0.0);
  put(v_pv_);
  put(p_pv_);
  put(ctl_ ? ctl_->amplitude() : 0.0);
  put(bypass_ && bypass_->engaged() ? 1.0 : 0.0);
  put3(i_line_);
  put3(i_wind_);
  put3(i_pv_);
  put3(e_);
  put(kvl_);
  put(kcl_);
  put(turbine_ ? turbine_->t_g() : 0.0);
  trace_.append(row_);
}

trace::TraceRecord Simulation::finish() {
  while (!done()) step();
  trace::write_rms_channels(trace_, s_.bases);
  return std::move(trace_);
}

trace::TraceRecord run(const Scenario& s) {
  Simulation sim(s);
  return sim.finish();
}

}  // namespace dvrsim
