#include "dvrsim/initialize.hpp"

#include <algorithm>
#include <cmath>

#include "dvrsim/error.hpp"
#include "dvrsim/pv.hpp"

namespace dvrsim {

namespace {

constexpr Phasor kJ{0.0, 1.0};

struct FilterPhasors {
  Phasor z_f;
  Phasor z_c;
  Phasor h;      // open-circuit transfer v_c / v_inv
  Phasor z_par;  // output impedance
};

FilterPhasors filter_phasors(const DvrParams& d, double omega) {
  FilterPhasors f;
  f.z_f = Phasor(d.filter_r, omega * d.filter_l);
  f.z_c = 1.0 / (kJ * omega * d.filter_c);
  f.h = f.z_c / (f.z_f + f.z_c);
  f.z_par = f.z_f * f.z_c / (f.z_f + f.z_c);
  return f;
}

class LoadFlow {
 public:
  LoadFlow(const Scenario& s, const Circuit& c) : s_(s), c_(c) {
    z_th_ = Phasor(c.r_th, c.omega * c.l_th);
    y_load_ = 1.0 / c.load.r;
    if (std::isfinite(c.load.l)) y_load_ += 1.0 / (kJ * c.omega * c.load.l);
    if (s.pv.present) {
      v_pv_ = s.pv.v_init_fraction * s.pv.model.open_circuit_voltage();
      p_pv_ = v_pv_ * pv::pv_current(s.pv.model, v_pv_);
    }
    if (c.dvr_active) f_ = filter_phasors(s.dvr, c.omega);
  }

  Phasor wind_injection(Phasor v, wind::OperatingPoint* op) const {
    if (!s_.wind.present) return {};
    wind::OperatingPoint p = wind::solve_operating_point(s_.wind.machine, s_.wind.aero, v.real(),
                                                         -v.imag(), c_.omega);
    if (op) *op = p;
    return -Phasor(p.currents.ds, -p.currents.qs);
  }

  Phasor pv_injection(Phasor v) const {
    if (!s_.pv.present) return {};
    const double mag = std::max(std::abs(v), c_.v_base_peak / kPvCurrentCap);
    return 2.0 * p_pv_ / (3.0 * mag * mag) * v;
  }

  // Bus voltage for EMF e and modulation u (u ignored when the DVR is out).
  Phasor bus(double e, double u, bool with_dvr) const {
    const Phasor z_t = z_th_ + (with_dvr ? series_r(u) : Phasor{});
    const Phasor e_eff = e + (with_dvr ? open_v(u) : Phasor{});
    Phasor v = e;
    for (int it = 0; it < 500; ++it) {
      const Phasor inj = wind_injection(v, nullptr) + pv_injection(v);
      const Phasor next = (e_eff / z_t + inj) / (1.0 / z_t + y_load_);
      if (std::abs(next - v) <= 1e-13 * std::abs(e)) return next;
      v = next;
    }
    throw NumericalError("initial load flow did not converge");
  }

  Phasor open_v(double u) const { return s_.dvr.ratio * f_.h * (u * 0.5 * s_.dvr.v_dc); }
  Phasor series_r(double) const { return s_.dvr.ratio * s_.dvr.ratio * f_.z_par; }

  const Phasor& z_th() const { return z_th_; }
  const FilterPhasors& filter() const { return f_; }
  double v_pv() const { return v_pv_; }
  double p_pv() const { return p_pv_; }

 private:
  const Scenario& s_;
  const Circuit& c_;
  Phasor z_th_;
  Phasor y_load_;
  FilterPhasors f_;
  double v_pv_ = 0.0;
  double p_pv_ = 0.0;
};

}  // namespace

Circuit derive_circuit(const Scenario& s) {
  Circuit c;
  c.omega = s.bases.omega();
  const double ratio = s.transformer.ratio();
  c.e_rated = s.source.v_ll / ratio * kSqrt2 / kSqrt3;
  // Source impedance on its own (grid-side) base, then referred.
  const double z = s.z_th.pu * s.source.v_ll * s.source.v_ll / s.z_th.s_base_va;
  const double r = z / std::sqrt(1.0 + s.z_th.x_over_r * s.z_th.x_over_r);
  c.r_th = r / (ratio * ratio);
  c.l_th = r * s.z_th.x_over_r / c.omega / (ratio * ratio);
  c.load = network::load_from_pq(s.load.p_w, s.load.q_var, s.bases.v_base_ll, s.bases.f_nominal);
  c.v_base_peak = s.bases.v_phase_peak();
  c.i_limit_peak = s.dvr.bypass_limit_pu * s.bases.current_base() * kSqrt2;
  c.window = signals::window_length(s.bases.f_nominal, s.solver.dt);
  c.dvr_active = s.dvr.present && s.dvr.enabled;
  return c;
}

double phase_value(Phasor x, double theta, int k) {
  return (x * std::polar(1.0, theta - kTwoPi * k / 3.0)).real();
}

SteadyState solve_steady_state(const Scenario& s, const Circuit& c) {
  LoadFlow lf(s, c);
  SteadyState st;
  st.e_peak = c.e_rated;
  if (s.source.emf == EmfMode::flat_bus) {
    for (int it = 0;; ++it) {
      const double mag = std::abs(lf.bus(st.e_peak, 0.0, false));
      if (std::abs(mag - c.v_base_peak) <= 1e-13 * c.v_base_peak) break;
      if (it == 100) throw NumericalError("flat-bus EMF scaling did not converge");
      st.e_peak *= c.v_base_peak / mag;
    }
  }

  if (c.dvr_active) {
    // |v_bus| is close to affine in u; a secant search from zero injection
    // stays near the operating point, where the turbine model is defined.
    const double lo = s.dvr.bidirectional ? -1.0 : 0.0;
    auto f = [&](double u) { return std::abs(lf.bus(st.e_peak, u, true)) - c.v_base_peak; };
    double u0 = 0.0, f0 = f(u0);
    double u1 = 0.01, f1 = f(u1);
    for (int it = 0; std::abs(f1) > 1e-12 * c.v_base_peak; ++it) {
      if (it == 100 || f1 == f0) throw NumericalError("initial DVR modulation search failed");
      const double u2 = std::clamp(u1 - f1 * (u1 - u0) / (f1 - f0), lo, 1.0);
      if (u2 == u1) break;  // saturated
      u0 = u1;
      f0 = f1;
      u1 = u2;
      f1 = f(u1);
    }
    st.u = u1;
  }

  st.v_bus = lf.bus(st.e_peak, st.u, c.dvr_active);
  st.i_wind = lf.wind_injection(st.v_bus, &st.wind);
  st.i_pv = lf.pv_injection(st.v_bus);
  st.v_pv = lf.v_pv();
  st.p_pv = lf.p_pv();
  if (c.dvr_active) {
    const Phasor z_t = lf.z_th() + lf.series_r(st.u);
    st.i_line = (st.e_peak + lf.open_v(st.u) - st.v_bus) / z_t;
    st.v_dvr = lf.open_v(st.u) - lf.series_r(st.u) * st.i_line;
    const FilterPhasors& fp = lf.filter();
    st.v_inv = st.u * 0.5 * s.dvr.v_dc;
    st.v_c = fp.h * st.v_inv - fp.z_par * (s.dvr.ratio * st.i_line);
    st.i_filter_l = (st.v_inv - st.v_c) / fp.z_f;
    st.i_filter_c = st.v_c / fp.z_c;
  } else {
    st.i_line = (st.e_peak - st.v_bus) / lf.z_th();
  }
  return st;
}

}  // namespace dvrsim
