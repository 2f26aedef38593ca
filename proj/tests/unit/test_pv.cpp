#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dvrsim/error.hpp"
#include "dvrsim/pv.hpp"
#include "oracles.hpp"

namespace dvrsim::pv {
namespace {

// alpha * v_t = 1 V exactly.
PvModel unit_model() {
  PvModel m;
  m.i_pv = 8.0;
  m.i_0 = 1e-9;
  m.alpha = 1.0;
  m.n_cell = m.q_e / (m.k * m.t_cell);
  return m;
}

TEST(PvCurrent, ShortCircuit) {
  const PvModel m;
  EXPECT_DOUBLE_EQ(pv_current(m, 0.0), m.i_pv);
  PvModel dark = m;
  dark.g = 0.0;
  EXPECT_EQ(pv_current(dark, 0.0), 0.0);
}

TEST(PvCurrent, OpenCircuitExample) {
  const PvModel m = unit_model();
  EXPECT_NEAR(m.alpha * m.thermal_voltage(), 1.0, 1e-12);
  EXPECT_NEAR(m.open_circuit_voltage(), 22.803, 1e-3);
  EXPECT_NEAR(m.open_circuit_voltage(), oracle::pv_voc_bisection(m), 1e-9);
}

TEST(PvCurrent, MatchesModelEquation) {
  const PvModel m;
  const double v_oc = m.open_circuit_voltage();
  for (int k = 0; k <= 100; ++k) {
    const double v = v_oc * k / 100.0;
    EXPECT_NEAR(pv_current(m, v), oracle::diode_current(m, v), 1e-12 * m.i_pv);
  }
}

TEST(PvCurrent, Guards) {
  const PvModel m;
  EXPECT_THROW(pv_current(m, -1.0), ValidationError);
  EXPECT_THROW(pv_current(m, 51.0 * m.alpha * m.thermal_voltage()), NumericalError);
  PvModel bad = m;
  bad.i_0 = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(PvCurrent, StrictlyDecreasing) {
  const PvModel m;
  const double v_oc = m.open_circuit_voltage();
  double prev = pv_current(m, 0.0);
  for (int k = 1; k <= 1000; ++k) {
    const double i = pv_current(m, v_oc * k / 1000.0);
    EXPECT_LT(i, prev);
    prev = i;
  }
}

TEST(PvCurrent, VocIsARoot) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> ipv(1.0, 40.0), lg(-12.0, -6.0), a(1.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    PvModel m;
    m.i_pv = ipv(rng);
    m.i_0 = std::pow(10.0, lg(rng));
    m.alpha = a(rng);
    EXPECT_LE(std::abs(pv_current(m, m.open_circuit_voltage())), 1e-9 * m.i_pv);
  }
}

TEST(MppBruteforce, InteriorMaximumMatchesGolden) {
  const PvModel m;
  const MppPoint b = mpp_bruteforce(m, 100000);
  const oracle::Mpp g = oracle::pv_mpp_golden(m);
  EXPECT_GT(b.v, 0.0);
  EXPECT_LT(b.v, m.open_circuit_voltage());
  EXPECT_NEAR(b.v, g.v, m.open_circuit_voltage() / 99999.0);
  EXPECT_LE(b.p, g.p + 1e-9);
  EXPECT_NEAR(b.p, g.p, 1e-6 * g.p);
}

TEST(MppBruteforce, DarkAndHalfIrradiance) {
  PvModel m;
  m.g = 0.0;
  EXPECT_EQ(mpp_bruteforce(m, 1000).p, 0.0);
  m.g = 1000.0;
  const MppPoint full = mpp_bruteforce(m, 20000);
  m.g = 500.0;
  const MppPoint half = mpp_bruteforce(m, 20000);
  EXPECT_LT(std::abs(half.v - full.v) / full.v, 0.05);
  EXPECT_NEAR(half.p / full.p, 0.5, 0.03);
  EXPECT_THROW(mpp_bruteforce(m, 999), ValidationError);
}

TEST(PerturbObserve, RisingPowerKeepsDirection) {
  PerturbObserve po(100.0, 1.0, 500.0);
  po.step(99.0, 1.0);  // p = 99 > 0: keep +1
  EXPECT_EQ(po.direction(), 1);
  EXPECT_DOUBLE_EQ(po.step(100.0, 1.0), 102.0);
}

TEST(PerturbObserve, FallingPowerReverses) {
  PerturbObserve po(100.0, 1.0, 500.0);
  po.step(100.0, 1.0);
  EXPECT_DOUBLE_EQ(po.step(101.0, 0.9), 100.0);
  EXPECT_EQ(po.direction(), -1);
  EXPECT_DOUBLE_EQ(po.prev_p(), 101.0 * 0.9);
  EXPECT_DOUBLE_EQ(po.prev_v(), 101.0);
}

TEST(PerturbObserve, ClampsAndRejectsBadStep) {
  PerturbObserve po(9.5, 1.0, 10.0);
  EXPECT_DOUBLE_EQ(po.step(9.5, 1.0), 10.0);
  EXPECT_THROW(PerturbObserve(1.0, 0.0, 10.0), ValidationError);
}

struct TrackResult {
  double worst = 0.0;   // largest |v_ref - v_mpp| in the tail
  double center = 0.0;  // midpoint of the tail's extent
  double max_power_excess = -1e300;
};

TrackResult track(const PvModel& m, double v_start_fraction, int cycles, int tail) {
  const double v_oc = m.open_circuit_voltage();
  const double v_mpp = mpp_bruteforce(m, 100000).v;
  const double p_mpp = oracle::pv_mpp_golden(m).p;
  PerturbObserve po(v_start_fraction * v_oc, 0.005 * v_oc, v_oc);
  TrackResult r;
  double lo = 1e300, hi = -1e300;
  for (int k = 0; k < cycles; ++k) {
    const double v = po.v_ref();
    const double i = pv_current(m, v);
    r.max_power_excess = std::max(r.max_power_excess, v * i - p_mpp);
    po.step(v, i);
    if (k >= cycles - tail) {
      r.worst = std::max(r.worst, std::abs(po.v_ref() - v_mpp));
      lo = std::min(lo, po.v_ref());
      hi = std::max(hi, po.v_ref());
    }
  }
  r.center = 0.5 * (lo + hi) - v_mpp;
  return r;
}

TEST(PerturbObserve, LimitCycleAroundMpp) {
  const PvModel m;
  const double step = 0.005 * m.open_circuit_voltage();
  const TrackResult r = track(m, 0.3, 400, 100);
  EXPECT_LE(std::abs(r.center), step);
  EXPECT_LE(r.worst, 2.0 * step);
}

TEST(PerturbObserve, ConvergesFromAnyStart) {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> start(0.01, 0.99), ipv(2.0, 40.0), gg(200.0, 1000.0);
  for (int k = 0; k < 50; ++k) {
    PvModel m;
    m.i_pv = ipv(rng);
    m.g = gg(rng);
    const double step = 0.005 * m.open_circuit_voltage();
    const TrackResult r = track(m, start(rng), 400, 200);
    EXPECT_LE(r.worst, 2.0 * step);
    EXPECT_LE(r.max_power_excess, 1e-9);
  }
}

}  // namespace
}  // namespace dvrsim::pv
