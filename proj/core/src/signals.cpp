#include "dvrsim/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dvrsim/error.hpp"

namespace dvrsim::signals {

namespace {
constexpr double kThird = 2.0 * kPi / 3.0;
}

DqFrame abc_to_dq(const ThreePhaseSample& s, double theta) noexcept {
  const double ca = std::cos(theta);
  const double cb = std::cos(theta - kThird);
  const double cc = std::cos(theta + kThird);
  const double sa = std::sin(theta);
  const double sb = std::sin(theta - kThird);
  const double sc = std::sin(theta + kThird);
  return {(2.0 / 3.0) * (s.a * ca + s.b * cb + s.c * cc),
          (2.0 / 3.0) * (s.a * sa + s.b * sb + s.c * sc), theta};
}

ThreePhaseSample dq_to_abc(const DqFrame& f) noexcept {
  const double th = f.theta;
  return {f.d * std::cos(th) + f.q * std::sin(th),
          f.d * std::cos(th - kThird) + f.q * std::sin(th - kThird),
          f.d * std::cos(th + kThird) + f.q * std::sin(th + kThird), 0.0};
}

ThreePhaseSample balanced(double amplitude, double theta) noexcept {
  return {amplitude * std::cos(theta), amplitude * std::cos(theta - kThird),
          amplitude * std::cos(theta + kThird), 0.0};
}

void PerUnitBase::validate() const {
  auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(v_base_ll)) throw ValidationError("voltage base must be positive");
  if (!ok(s_base)) throw ValidationError("power base must be positive");
  if (!ok(f_nominal)) throw ValidationError("nominal frequency must be positive");
}

double to_per_unit(double x, const PerUnitBase& base, PuKind kind) {
  base.validate();
  switch (kind) {
    case PuKind::voltage:
      return x / base.v_base_ll;
    case PuKind::current:
      return x / base.current_base();
    case PuKind::power:
      return x / base.s_base;
    case PuKind::impedance:
      return x / base.impedance_base();
  }
  return x;
}

std::size_t window_length(double f_nominal, double dt) {
  if (!(f_nominal > 0.0) || !(dt > 0.0)) {
    throw ValidationError("window length needs positive frequency and step");
  }
  const double exact = 1.0 / (f_nominal * dt);
  const double n = std::round(exact);
  if (std::abs(exact - n) > 1e-3 * exact) {
    throw ValidationError("time step " + std::to_string(dt) +
                          " s does not divide the fundamental period");
  }
  if (n < 8.0) {
    throw ValidationError("fewer than 8 samples per fundamental period");
  }
  return static_cast<std::size_t>(n);
}

MovingSum::MovingSum(std::size_t n) : buf_(n, 0.0) {
  if (n == 0) throw ValidationError("moving window must be non-empty");
}

void MovingSum::push(double x) {
  sum_ += x - buf_[head_];
  buf_[head_] = x;
  if (++head_ == buf_.size()) {
    head_ = 0;
    sum_ = std::accumulate(buf_.begin(), buf_.end(), 0.0);
  }
}

void MovingSum::fill(double x) {
  std::fill(buf_.begin(), buf_.end(), x);
  head_ = 0;
  sum_ = std::accumulate(buf_.begin(), buf_.end(), 0.0);
}

SlidingRms::SlidingRms(std::size_t n) : sq_(n) {}

double SlidingRms::push(double x) {
  sq_.push(x * x);
  return value();
}

double SlidingRms::value() const {
  return std::sqrt(std::max(sq_.sum(), 0.0) / static_cast<double>(sq_.size()));
}

SequenceExtractor::SequenceExtractor(std::size_t n) : d_(n), q_(n) {}

double SequenceExtractor::push(const ThreePhaseSample& s, double theta) {
  const DqFrame f = abc_to_dq(s, theta);
  d_.push(f.d);
  q_.push(f.q);
  return magnitude();
}

double SequenceExtractor::mean_d() const {
  return d_.sum() / static_cast<double>(d_.size());
}

double SequenceExtractor::mean_q() const {
  return q_.sum() / static_cast<double>(q_.size());
}

double SequenceExtractor::magnitude() const {
  return std::hypot(mean_d(), mean_q());
}

void SequenceExtractor::prime(double d, double q) {
  d_.fill(d);
  q_.fill(q);
}

}  // namespace dvrsim::signals
