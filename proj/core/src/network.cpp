#include "dvrsim/network.hpp"

#include <cmath>

#include "dvrsim/error.hpp"

namespace dvrsim::network {

RlBranch::RlBranch(double r, double l, double dt) : r_(r), l_(l) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (!(r >= 0.0) || !(l >= 0.0) || (r == 0.0 && l == 0.0)) {
    throw ValidationError("R-L branch needs r >= 0, l >= 0 and a non-zero impedance");
  }
  const double two_l = 2.0 * l / dt;
  g_ = 1.0 / (r + two_l);
  k_ = two_l - r;
  update_history();
}

void RlBranch::update_history() { hist_ = g_ * (v_ + k_ * i_); }

double RlBranch::commit(double v_next) {
  i_ = g_ * v_next + hist_;
  v_ = v_next;
  update_history();
  return i_;
}

void RlBranch::set_state(double i, double v) {
  i_ = i;
  v_ = v;
  update_history();
}

void IdealTransformer::validate() const {
  if (!(ratio > 0.0) || !std::isfinite(ratio)) {
    throw ValidationError("transformer ratio must be positive");
  }
}

TheveninSource::TheveninSource(double e_peak, double r_th, double l_th, double dt)
    : e_peak_(e_peak), r_th_(r_th), l_th_(l_th) {
  if (!(e_peak >= 0.0)) throw ValidationError("source EMF must be non-negative");
  if (!(r_th >= 0.0)) throw ValidationError("source resistance must be non-negative");
  if (!(l_th > 0.0)) throw ValidationError("source inductance must be positive");
  for (auto& b : branch_) b = RlBranch(r_th, l_th, dt);
}

ThreePhaseSample TheveninSource::emf(double theta, const PhaseFactors& mult) const {
  ThreePhaseSample e = signals::balanced(e_peak_, theta);
  e.a *= mult[0];
  e.b *= mult[1];
  e.c *= mult[2];
  return e;
}

ThreePhaseSample TheveninSource::step(const ThreePhaseSample& v_node, const PhaseFactors& mult,
                                      double theta_next) {
  const ThreePhaseSample e = emf(theta_next, mult);
  ThreePhaseSample i;
  for (int k = 0; k < 3; ++k) i[k] = branch_[k].commit(e[k] - v_node[k]);
  i.t = v_node.t;
  return i;
}

RlLoad::RlLoad(double r, double l, double dt) : r_(r), l_(l) {
  if (!(r > 0.0)) throw ValidationError("load resistance must be positive");
  if (!(l > 0.0)) throw ValidationError("load inductance must be positive");
  if (has_inductor()) {
    for (auto& b : ind_) b = RlBranch(0.0, l, dt);
  }
}

Norton RlLoad::companion(int phase) const {
  Norton n{1.0 / r_, 0.0};
  if (has_inductor()) {
    const Norton li = ind_[phase].companion();
    n.g += li.g;
    n.hist = li.hist;
  }
  return n;
}

double RlLoad::commit(int phase, double v_next) {
  double i = v_next / r_;
  if (has_inductor()) i += ind_[phase].commit(v_next);
  return i;
}

ThreePhaseSample RlLoad::step(const ThreePhaseSample& v_next) {
  ThreePhaseSample i;
  for (int k = 0; k < 3; ++k) i[k] = commit(k, v_next[k]);
  i.t = v_next.t;
  return i;
}

void RlLoad::set_state(int phase, double i_l, double v) {
  if (has_inductor()) ind_[phase].set_state(i_l, v);
}

LoadRating load_from_pq(double p, double q, double v_ll, double f) {
  if (!(p > 0.0)) throw ValidationError("load active power must be positive");
  if (!(q >= 0.0)) throw ValidationError("load reactive power must be non-negative");
  if (!(v_ll > 0.0)) throw ValidationError("load voltage must be positive");
  if (!(f > 0.0)) throw ValidationError("frequency must be positive");
  LoadRating out;
  out.r = v_ll * v_ll / p;
  if (q > 0.0) out.l = (v_ll * v_ll / q) / (kTwoPi * f);
  return out;
}

SeriesPath series_path(const Norton& source, double e, double v_open, double r_series) {
  if (r_series == 0.0 && v_open == 0.0) return {source.g, e, source.hist};
  const double scale = 1.0 / (1.0 + source.g * r_series);
  return {source.g * scale, e + v_open, source.hist * scale};
}

double bus_solve(const SeriesPath& path, const Norton& load, double i_injected) {
  const double g_total = path.g + load.g;
  if (!(g_total != 0.0) || !std::isfinite(g_total)) {
    throw NumericalError("singular load-bus node: total conductance is zero");
  }
  return (path.g * path.e_eff + path.hist + i_injected - load.hist) / g_total;
}

}  // namespace dvrsim::network
