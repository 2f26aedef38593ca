#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dvrsim/error.hpp"
#include "dvrsim/signals.hpp"
#include "oracles.hpp"

namespace dvrsim {
namespace {

using signals::abc_to_dq;
using signals::dq_to_abc;

ThreePhaseSample set(double amp, double theta, double phi = 0.0) {
  return {amp * std::cos(theta + phi), amp * std::cos(theta + phi - kTwoPi / 3),
          amp * std::cos(theta + phi + kTwoPi / 3), 0.0};
}

TEST(Park, AlignedBalancedSetIsPureD) {
  for (double th : {0.0, 0.3, 1.7, -2.5, 100.0}) {
    const DqFrame f = abc_to_dq(set(1.0, th), th);
    EXPECT_NEAR(f.d, 1.0, 1e-14);
    EXPECT_NEAR(f.q, 0.0, 1e-14);
  }
}

TEST(Park, ZeroInput) {
  const DqFrame f = abc_to_dq({0, 0, 0, 0}, 0.7);
  EXPECT_EQ(f.d, 0.0);
  EXPECT_EQ(f.q, 0.0);
}

TEST(Park, SinglePhaseRowMatchesHandValue) {
  const DqFrame f = abc_to_dq({1, 0, 0, 0}, 0.0);
  EXPECT_NEAR(f.d, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.q, 0.0, 1e-15);
}

TEST(Park, AgreesWithWrittenOutMatrix) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng), th = u(rng);
    const DqFrame f = abc_to_dq({a, b, c, 0}, th);
    const oracle::Dq o = oracle::park(a, b, c, th);
    EXPECT_NEAR(f.d, o.d, 1e-12);
    EXPECT_NEAR(f.q, o.q, 1e-12);
  }
}

TEST(Park, PhaseLeadShowsAsNegativeQ) {
  const DqFrame f = abc_to_dq(set(2.0, 0.4, 0.3), 0.4);
  EXPECT_NEAR(f.d, 2.0 * std::cos(0.3), 1e-14);
  EXPECT_NEAR(f.q, -2.0 * std::sin(0.3), 1e-14);
}

TEST(InversePark, HandValues) {
  const ThreePhaseSample s = dq_to_abc({1.0, 0.0, 0.0});
  EXPECT_NEAR(s.a, 1.0, 1e-15);
  EXPECT_NEAR(s.b, -0.5, 1e-15);
  EXPECT_NEAR(s.c, -0.5, 1e-15);
  const ThreePhaseSample z = dq_to_abc({0.0, 0.0, 1.3});
  EXPECT_EQ(z.a, 0.0);
  EXPECT_EQ(z.b, 0.0);
  EXPECT_EQ(z.c, 0.0);
}

TEST(InversePark, RoundTripOnRandomBalancedSamples) {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> amp(0.0, 1.0), ang(-kPi, kPi);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double th = ang(rng);
    const ThreePhaseSample s = set(amp(rng), th, ang(rng));
    const ThreePhaseSample r = dq_to_abc(abc_to_dq(s, th));
    for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, std::abs(r[k] - s[k]));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(InversePark, DropsZeroSequence) {
  const ThreePhaseSample s = set(1.0, 0.2);
  const ThreePhaseSample with_zero{s.a + 0.3, s.b + 0.3, s.c + 0.3, 0};
  const ThreePhaseSample r = dq_to_abc(abc_to_dq(with_zero, 0.2));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r[k], s[k], 1e-14);
}

TEST(PerUnit, BaseQuantities) {
  const signals::PerUnitBase b;
  EXPECT_NEAR(b.current_base(), 100e3 / (std::sqrt(3.0) * 400.0), 1e-12);
  EXPECT_NEAR(b.impedance_base(), 1.6, 1e-15);
  EXPECT_NEAR(b.v_phase_rms(), 230.9401076758503, 1e-9);
  EXPECT_NEAR(b.v_phase_peak(), 326.5986323710904, 1e-9);
}

TEST(PerUnit, Examples) {
  const signals::PerUnitBase b;
  EXPECT_DOUBLE_EQ(signals::to_per_unit(400.0, b, signals::PuKind::voltage), 1.0);
  EXPECT_EQ(signals::to_per_unit(0.0, b, signals::PuKind::voltage), 0.0);
  EXPECT_DOUBLE_EQ(signals::to_per_unit(320.0, b, signals::PuKind::voltage), 0.8);
  EXPECT_DOUBLE_EQ(signals::to_per_unit(50e3, b, signals::PuKind::power), 0.5);
  EXPECT_DOUBLE_EQ(signals::to_per_unit(3.2, b, signals::PuKind::impedance), 2.0);
}

TEST(PerUnit, RejectsNonPositiveBase) {
  signals::PerUnitBase b;
  b.s_base = 0.0;
  EXPECT_THROW(b.validate(), ValidationError);
  EXPECT_THROW(signals::to_per_unit(1.0, b, signals::PuKind::power), ValidationError);
  b = {};
  b.v_base_ll = -400.0;
  EXPECT_THROW(b.validate(), ValidationError);
}

TEST(WindowLength, RoundsAndRejects) {
  EXPECT_EQ(signals::window_length(50.0, 50e-6), 400u);
  EXPECT_EQ(signals::window_length(50.0, 25e-6), 800u);
  EXPECT_EQ(signals::window_length(60.0, 1.0 / 6000.0), 100u);
  EXPECT_THROW(signals::window_length(50.0, 0.003), ValidationError);  // 6.67 samples
  EXPECT_THROW(signals::window_length(50.0, 0.0031), ValidationError);
  EXPECT_THROW(signals::window_length(50.0, 47e-6), ValidationError);  // 425.5
}

TEST(SlidingRms, Examples) {
  const std::size_t n = 400;
  signals::SlidingRms zero(n), unit(n), volts(n);
  double r0 = 0, r1 = 0, r2 = 0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / n;
    r0 = zero.push(0.0);
    r1 = unit.push(std::sin(th));
    r2 = volts.push(326.60 * std::sin(th));
  }
  EXPECT_EQ(r0, 0.0);
  EXPECT_NEAR(r1, 0.7071, 0.001);
  EXPECT_NEAR(r2, 230.94, 0.3);
}

TEST(SlidingRms, WindowEndPositionDoesNotMatter) {
  const std::size_t n = 400;
  signals::SlidingRms rms(n);
  std::vector<double> out;
  for (std::size_t i = 0; i < 5 * n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / n;
    const double x = std::sin(th) + 0.3 * std::sin(3 * th + 0.4) + 0.1;
    out.push_back(rms.push(x));
  }
  double lo = 1e9, hi = -1e9;
  for (std::size_t i = n; i < out.size(); ++i) {
    lo = std::min(lo, out[i]);
    hi = std::max(hi, out[i]);
  }
  EXPECT_LT(hi - lo, 1e-9);
  EXPECT_GE(lo, 0.0);
}

TEST(SlidingRms, NonNegativeUnderCancellation) {
  signals::SlidingRms rms(8);
  for (int i = 0; i < 100; ++i) EXPECT_GE(rms.push(i % 2 ? 1e8 : 1e-8), 0.0);
  for (int i = 0; i < 8; ++i) rms.push(0.0);
  EXPECT_EQ(rms.value(), 0.0);
}

double run_extractor(double amp, double phi, bool negative, std::size_t periods = 2) {
  const std::size_t n = 400;
  signals::SequenceExtractor ex(n);
  double m = 0.0;
  for (std::size_t i = 0; i < periods * n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / n;
    ThreePhaseSample s = set(amp, th, phi);
    if (negative) std::swap(s.b, s.c);
    m = ex.push(s, th);
  }
  return m;
}

TEST(SequenceExtractor, Examples) {
  EXPECT_NEAR(run_extractor(1.0, 0.0, false), 1.0, 0.001);
  EXPECT_NEAR(run_extractor(1.0, 0.0, true), 0.0, 0.001);
  EXPECT_NEAR(run_extractor(0.8, 0.0, false), 0.8, 0.001);
}

TEST(SequenceExtractor, SettlesWithinOnePeriodAndStays) {
  const std::size_t n = 400;
  signals::SequenceExtractor ex(n);
  for (std::size_t i = 0; i < 4 * n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / n;
    const double m = ex.push(set(2.5, th), th);
    if (i >= n - 1) {
      ASSERT_NEAR(m, 2.5, 2.5e-3) << "sample " << i;
    }
  }
}

TEST(SequenceExtractor, RejectsHarmonicsAndNegativeSequence) {
  const std::size_t n = 400;
  signals::SequenceExtractor ex(n);
  double m = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    const double th = kTwoPi * static_cast<double>(i) / n;
    ThreePhaseSample s = set(1.0, th);
    ThreePhaseSample neg = set(0.2, th, 0.5);
    std::swap(neg.b, neg.c);
    ThreePhaseSample h5 = set(0.1, 5 * th);
    for (std::size_t k = 0; k < 3; ++k) s[k] += neg[k] + h5[k];
    m = ex.push(s, th);
  }
  EXPECT_NEAR(m, 1.0, 1e-9);
}

TEST(SequenceExtractor, InvariantUnderCommonRotation) {
  const double ref = run_extractor(1.3, 0.0, false);
  for (double phi : {0.4, -1.2, 2.9}) EXPECT_NEAR(run_extractor(1.3, phi, false), ref, 1.3e-3);
}

TEST(SequenceExtractor, ScalesLinearly) {
  const std::size_t n = 400;
  for (double k : {2.0, 0.5, 0.25, 8.0}) {
    signals::SequenceExtractor a(n), b(n);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < 2 * n; ++i) {
      const double th = kTwoPi * static_cast<double>(i) / n;
      ThreePhaseSample s = set(0.9, th, 0.2);
      s.a += 0.05 * std::cos(7 * th);
      ThreePhaseSample ks{k * s.a, k * s.b, k * s.c, 0};
      ma = a.push(s, th);
      mb = b.push(ks, th);
    }
    EXPECT_EQ(mb, k * ma) << "k=" << k;
  }
}

TEST(SequenceExtractor, PrimeActsAsSteadyHistory) {
  signals::SequenceExtractor ex(400);
  ex.prime(0.6, -0.8);
  EXPECT_NEAR(ex.magnitude(), 1.0, 1e-13);
  EXPECT_NEAR(ex.mean_d(), 0.6, 1e-13);
  EXPECT_NEAR(ex.mean_q(), -0.8, 1e-13);
}

}  // namespace
}  // namespace dvrsim
