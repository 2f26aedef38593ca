#pragma once

// Fixed-step orchestrator. Each step: advance the reference angle, apply the
// event schedule, run the DVR controller on the previous bus sample, update
// the VSI and filter, step the turbine and PV, solve the load bus and record.

#include <array>
#include <optional>

#include "dvrsim/dvr.hpp"
#include "dvrsim/initialize.hpp"
#include "dvrsim/network.hpp"
#include "dvrsim/pv.hpp"
#include "dvrsim/scenario.hpp"
#include "dvrsim/trace.hpp"
#include "dvrsim/wind.hpp"

namespace dvrsim {

class Simulation {
 public:
  // Throws ValidationError listing every violation when the scenario is
  // invalid.
  explicit Simulation(Scenario s);

  // Advances one step and records a row. Component failures surface as
  // StepError.
  void step();
  bool done() const { return n_ >= steps_; }
  std::size_t step_index() const { return n_; }
  double time() const { return t(n_); }

  const Scenario& scenario() const { return s_; }
  const Circuit& circuit() const { return c_; }
  const SteadyState& initial_state() const { return init_; }
  const trace::TraceRecord& trace() const { return trace_; }

  // Runs to the end, fills the RMS channels and hands over the trace.
  trace::TraceRecord finish();

 private:
  double t(std::size_t n) const { return static_cast<double>(n) * s_.solver.dt; }
  double theta(std::size_t n) const;
  void initialize();
  void advance();
  void record();

  Scenario s_;
  Circuit c_;
  SteadyState init_;
  std::size_t steps_ = 0;
  std::size_t n_ = 0;

  network::TheveninSource source_;
  network::RlLoad load_;
  std::optional<dvr::LcFilter> filter_;
  std::optional<dvr::Controller> ctl_;
  std::optional<dvr::BypassSwitch> bypass_;
  std::optional<wind::WindTurbine> turbine_;
  std::optional<pv::PerturbObserve> mppt_;
  std::optional<signals::SequenceExtractor> pv_sync_;

  // Latest committed values, one entry per phase.
  ThreePhaseSample e_, v_grid_, v_dvr_, v_load_, i_line_, i_load_, i_wind_, i_pv_;
  std::array<double, 3> v_l_th_{};  // checker's own source-inductor voltage
  double v_pv_ = 0.0;
  double p_pv_ = 0.0;
  double kvl_ = 0.0;
  double kcl_ = 0.0;

  trace::TraceRecord trace_;
  std::vector<double> row_;
};

// Validates, simulates and post-processes one scenario.
trace::TraceRecord run(const Scenario& s);

}  // namespace dvrsim
