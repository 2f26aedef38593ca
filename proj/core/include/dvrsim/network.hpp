#pragma once

// Grid Thevenin source, ideal transformer, constant-impedance load and the
// load-bus nodal solve. Every inductor is discretized with the trapezoidal
// rule into a Norton companion (conductance + history current source).

#include <array>
#include <limits>

#include "dvrsim/signals.hpp"

namespace dvrsim::network {

using PhaseFactors = std::array<double, 3>;

// i_{n+1} = g * v_{n+1} + hist
struct Norton {
  double g = 0.0;
  double hist = 0.0;
};

// Series R-L branch under the trapezoidal rule. v is the voltage across the
// whole branch.
class RlBranch {
 public:
  RlBranch() = default;
  RlBranch(double r, double l, double dt);

  Norton companion() const { return {g_, hist_}; }
  // Advance to the new branch voltage; returns the new current.
  double commit(double v_next);
  void set_state(double i, double v);

  double current() const { return i_; }
  double voltage() const { return v_; }
  double r() const { return r_; }
  double l() const { return l_; }

 private:
  void update_history();

  double r_ = 0.0;
  double l_ = 0.0;
  double g_ = 0.0;
  double k_ = 0.0;  // 2L/dt - R
  double i_ = 0.0;
  double v_ = 0.0;
  double hist_ = 0.0;
};

struct IdealTransformer {
  double ratio = 50.0;  // primary : secondary voltage, Yg-Yg

  double voltage_to_secondary(double v1) const { return v1 / ratio; }
  double current_to_secondary(double i1) const { return i1 * ratio; }
  double impedance_to_secondary(double z1) const { return z1 / (ratio * ratio); }
  void validate() const;
};

// Ideal three-phase EMF behind R-L, all quantities on the load-bus side.
class TheveninSource {
 public:
  TheveninSource(double e_peak, double r_th, double l_th, double dt);

  double e_peak() const { return e_peak_; }
  double r_th() const { return r_th_; }
  double l_th() const { return l_th_; }

  // Per-phase EMF for reference angle theta; phases 120 degrees apart.
  ThreePhaseSample emf(double theta, const PhaseFactors& mult) const;

  Norton companion(int phase) const { return branch_[phase].companion(); }
  const RlBranch& branch(int phase) const { return branch_[phase]; }
  RlBranch& branch(int phase) { return branch_[phase]; }

  // Advance every phase against the node voltage v_node at the new time.
  // Returns the source-branch currents.
  ThreePhaseSample step(const ThreePhaseSample& v_node, const PhaseFactors& mult,
                        double theta_next);

 private:
  double e_peak_;
  double r_th_;
  double l_th_;
  std::array<RlBranch, 3> branch_;
};

// Parallel R || L per phase.
class RlLoad {
 public:
  RlLoad(double r, double l, double dt);

  double r() const { return r_; }
  // Infinity when the load has no reactive branch.
  double l() const { return l_; }
  bool has_inductor() const { return l_ < std::numeric_limits<double>::infinity(); }

  Norton companion(int phase) const;
  // Commit the new bus voltage for one phase; returns the load current.
  double commit(int phase, double v_next);
  ThreePhaseSample step(const ThreePhaseSample& v_next);

  double inductor_current(int phase) const { return ind_[phase].current(); }
  void set_state(int phase, double i_l, double v);

 private:
  double r_;
  double l_;
  std::array<RlBranch, 3> ind_;
};

struct LoadRating {
  double r = 0.0;
  double l = std::numeric_limits<double>::infinity();
};

// R || L consuming exactly (p, q) at balanced nominal voltage v_ll.
// q = 0 yields a purely resistive load (l = infinity).
LoadRating load_from_pq(double p, double q, double v_ll, double f);

// Current through the series path (source branch, optionally the DVR) as
// seen from the load bus: i = g * (e_eff - v_bus) + hist.
struct SeriesPath {
  double g = 0.0;
  double e_eff = 0.0;
  double hist = 0.0;

  double current(double v_bus) const { return g * (e_eff - v_bus) + hist; }
};

// Source companion (branch voltage e - v_src_node) in series with a Thevenin
// injection v_dvr = v_open - r_series * i.
SeriesPath series_path(const Norton& source, double e, double v_open, double r_series);

// Scalar nodal solve at the load bus for one phase:
//   path.current(v) + i_injected = load.g * v + load.hist.
// Throws NumericalError when the total conductance is zero.
double bus_solve(const SeriesPath& path, const Norton& load, double i_injected);

}  // namespace dvrsim::network
