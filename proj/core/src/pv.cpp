#include "dvrsim/pv.hpp"

#include <algorithm>
#include <cmath>

#include "dvrsim/error.hpp"

namespace dvrsim::pv {

void PvModel::validate() const {
  if (!(i_pv >= 0.0)) throw ValidationError("PV photocurrent must be non-negative");
  if (!(i_0 > 0.0)) throw ValidationError("PV saturation current must be positive");
  if (!(alpha >= 1.0)) throw ValidationError("PV ideality factor must be at least 1");
  if (!(t_cell > 0.0)) throw ValidationError("PV cell temperature must be positive");
  if (!(n_cell >= 1.0)) throw ValidationError("PV string needs at least one cell");
  if (!(g >= 0.0)) throw ValidationError("irradiance must be non-negative");
  if (!(k > 0.0) || !(q_e > 0.0)) throw ValidationError("physical constants must be positive");
}

double PvModel::open_circuit_voltage() const {
  return alpha * thermal_voltage() * std::log1p(photocurrent() / i_0);
}

double pv_current(const PvModel& m, double v) {
  if (!(v >= 0.0)) throw ValidationError("PV voltage must be non-negative");
  const double avt = m.alpha * m.thermal_voltage();
  if (v > 50.0 * avt) throw NumericalError("PV voltage beyond the diode exponent guard");
  return m.photocurrent() - m.i_0 * std::expm1(v / avt);
}

MppPoint mpp_bruteforce(const PvModel& m, std::size_t n_points) {
  if (n_points < 1000) throw ValidationError("MPP scan needs at least 1000 points");
  m.validate();
  const double v_oc = m.open_circuit_voltage();
  MppPoint best;
  for (std::size_t k = 0; k < n_points; ++k) {
    const double v = v_oc * static_cast<double>(k) / static_cast<double>(n_points - 1);
    const double p = v * pv_current(m, v);
    if (p > best.p) best = {v, p};
  }
  return best;
}

PerturbObserve::PerturbObserve(double v_ref, double step, double v_max)
    : v_ref_(v_ref), step_(step), v_max_(v_max) {
  if (!(step > 0.0)) throw ValidationError("MPPT step must be positive");
  if (!(v_max >= 0.0)) throw ValidationError("MPPT voltage limit must be non-negative");
  v_ref_ = std::clamp(v_ref_, 0.0, v_max_);
}

double PerturbObserve::step(double v_meas, double i_meas) {
  const double p = v_meas * i_meas;
  if (!(p > prev_p_)) direction_ = -direction_;
  prev_v_ = v_meas;
  prev_p_ = p;
  v_ref_ = std::clamp(v_ref_ + direction_ * step_, 0.0, v_max_);
  return v_ref_;
}

}  // namespace dvrsim::pv
