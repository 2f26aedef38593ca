#pragma once

// Three-phase signal primitives: Park transform, sliding RMS, fundamental
// positive-sequence magnitude and per-unit conversion.

#include <cstddef>
#include <vector>

namespace dvrsim {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrt3 = 1.73205080756887729353;

enum class Phase { a = 0, b = 1, c = 2 };

struct ThreePhaseSample {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double t = 0.0;

  double operator[](std::size_t k) const { return k == 0 ? a : (k == 1 ? b : c); }
  double& operator[](std::size_t k) { return k == 0 ? a : (k == 1 ? b : c); }
};

struct DqFrame {
  double d = 0.0;
  double q = 0.0;
  double theta = 0.0;
};

namespace signals {

// Amplitude-invariant Park transform with q lagging d. A balanced set
// a = A cos(theta + phi) maps to d = A cos(phi), q = -A sin(phi); the
// zero-sequence component is discarded.
DqFrame abc_to_dq(const ThreePhaseSample& s, double theta) noexcept;

// Inverse of abc_to_dq on the zero-sequence-free subspace. The returned
// sample has t = 0.
ThreePhaseSample dq_to_abc(const DqFrame& f) noexcept;

// Balanced positive-sequence set of peak `amplitude` aligned with `theta`.
ThreePhaseSample balanced(double amplitude, double theta) noexcept;

struct PerUnitBase {
  double v_base_ll = 400.0;   // line-to-line RMS, V
  double s_base = 100e3;      // three-phase, VA
  double f_nominal = 50.0;    // Hz

  double current_base() const { return s_base / (kSqrt3 * v_base_ll); }
  double impedance_base() const { return v_base_ll * v_base_ll / s_base; }
  double v_phase_rms() const { return v_base_ll / kSqrt3; }
  double v_phase_peak() const { return v_base_ll * kSqrt2 / kSqrt3; }
  double omega() const { return kTwoPi * f_nominal; }

  // Throws ValidationError unless every base is finite and strictly positive.
  void validate() const;
};

enum class PuKind { voltage, current, power, impedance };

// Voltage is taken as line-to-line RMS; current as line RMS.
double to_per_unit(double x, const PerUnitBase& base, PuKind kind);

// Samples per fundamental period. Throws ValidationError when dt does not
// divide the period to within 0.1 % or when fewer than 8 samples result.
std::size_t window_length(double f_nominal, double dt);

// Fixed-length moving sum over a ring buffer. The running sum is rebuilt
// from the buffer once per lap so rounding does not accumulate.
class MovingSum {
 public:
  explicit MovingSum(std::size_t n);

  void push(double x);
  void fill(double x);
  double sum() const { return sum_; }
  std::size_t size() const { return buf_.size(); }

 private:
  std::vector<double> buf_;
  std::size_t head_ = 0;
  double sum_ = 0.0;
};

class SlidingRms {
 public:
  explicit SlidingRms(std::size_t n);

  // Pushes one sample and returns the RMS of the most recent n samples.
  double push(double x);
  double value() const;
  std::size_t size() const { return sq_.size(); }

 private:
  MovingSum sq_;
};

// Fundamental positive-sequence magnitude via one-period moving averages of
// the synchronous-frame d and q components. Negative sequence and integer
// harmonics appear as whole-period ripple in that frame and average out.
class SequenceExtractor {
 public:
  explicit SequenceExtractor(std::size_t n);

  double push(const ThreePhaseSample& s, double theta);
  double magnitude() const;
  double mean_d() const;
  double mean_q() const;

  // Fill both windows with a steady value, as if the input had been
  // constant in the synchronous frame for a full period.
  void prime(double d, double q);

 private:
  MovingSum d_;
  MovingSum q_;
};

}  // namespace signals
}  // namespace dvrsim
