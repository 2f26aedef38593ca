#pragma once

// Full description of one simulation: bases, component parameters, event
// schedule and solver settings. Serialized as a single JSON document.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dvrsim/events.hpp"
#include "dvrsim/pv.hpp"
#include "dvrsim/signals.hpp"
#include "dvrsim/wind.hpp"

namespace dvrsim {

inline constexpr int kScenarioSchemaVersion = 1;

enum class EmfMode {
  nominal,   // EMF equals the rated source voltage
  flat_bus,  // EMF scaled so the undisturbed, uncompensated bus sits at 1 pu
};

struct SourceParams {
  double v_ll = 20e3;  // rated L-L RMS on the grid side, V
  EmfMode emf = EmfMode::flat_bus;
};

struct TransformerParams {
  double v1_ll = 20e3;
  double v2_ll = 400.0;

  double ratio() const { return v1_ll / v2_ll; }
};

// Source impedance in per unit of (source v_ll, s_base_va), grid side.
struct ZthParams {
  double pu = 0.05;
  double x_over_r = 5.0;
  double s_base_va = 100e3;
};

struct LoadParams {
  double p_w = 20e3;
  double q_var = 15e3;
};

struct WindParams {
  bool present = true;
  wind::AeroParams aero;
  wind::MachineParams machine;
};

struct PvParams {
  bool present = true;
  pv::PvModel model;
  double mppt_step_fraction = 0.005;  // of v_oc, per cycle
  double v_init_fraction = 0.75;      // of v_oc
};

struct DvrParams {
  bool present = true;
  bool enabled = true;
  double v_dc = 800.0;
  double filter_l = 1e-3;
  double filter_r = 0.005;
  double filter_c = 100e-6;
  double ratio = 1.0;
  double kp = 10.0;
  double ki = 500.0;
  bool bidirectional = true;
  double bypass_limit_pu = 2.0;  // of rated line current (peak basis)
  double rearm_fraction = 0.8;
};

struct SolverParams {
  double dt = 50e-6;
  double t_end = 1.0;
};

struct Scenario {
  int schema_version = kScenarioSchemaVersion;
  std::string name = "scenario";
  signals::PerUnitBase bases;
  SourceParams source;
  TransformerParams transformer;
  ZthParams z_th;
  LoadParams load;
  WindParams wind;
  PvParams pv;
  DvrParams dvr;
  events::Schedule events;
  SolverParams solver;
  std::vector<std::string> record;  // CSV channels; empty = full schema

  // Number of steps (rows - 1).
  std::size_t steps() const;
};

// Every violated invariant; empty when the scenario can run.
std::vector<std::string> validate(const Scenario& s);

// Dotted-key override, e.g. {"dvr.kp", "4.5"}. The value is parsed as JSON
// and falls back to a plain string.
using Override = std::pair<std::string, std::string>;
Override parse_override(std::string_view text);

// Parsing throws ValidationError on malformed JSON, unknown keys or wrong
// types. Overrides are applied to the document before it is decoded.
Scenario scenario_from_json(std::string_view json_text, const std::vector<Override>& overrides = {});
Scenario load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides = {});
std::string scenario_to_json(const Scenario& s);

}  // namespace dvrsim
