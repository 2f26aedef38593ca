#pragma once

// Scripted source disturbances and IEEE-1159 classification of RMS traces.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dvrsim/signals.hpp"

namespace dvrsim::events {

enum class EventKind { sag, swell };

struct VoltageEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  EventKind kind = EventKind::sag;
  double depth = 0.0;  // fraction of nominal: 0.2 sag -> x0.8, 0.2 swell -> x1.2
  std::array<bool, 3> phases{true, true, true};
};

using Schedule = std::vector<VoltageEvent>;

// Every violated invariant, in schedule order. Empty means valid.
std::vector<std::string> validate_schedule(std::span<const VoltageEvent> schedule);

// EMF amplitude multiplier for one phase at time t. Events cover
// [t_start, t_end).
double source_multiplier(std::span<const VoltageEvent> schedule, double t, Phase phase);

enum class PqKind { normal, sag, swell, interruption, overvoltage, undervoltage };

std::string_view to_string(PqKind kind);
std::string_view to_string(EventKind kind);

struct PqRecord {
  PqKind kind = PqKind::normal;
  double t_start = 0.0;
  double t_end = 0.0;
  double extremal_pu = 1.0;
  double duration = 0.0;
};

struct ClassifierLimits {
  double interruption_below = 0.10;
  double sag_below = 0.90;
  double swell_above = 1.10;
  double max_short_duration = 60.0;  // s
  // A disturbance that settles on a new level for at least half a cycle
  // starts a new record when the levels differ by more than this (pu).
  double stage_step = 0.05;
  // Largest per-cycle change still treated as a settled level (pu).
  double settled_slope_per_cycle = 0.02;
};

// Classifies a uniformly sampled per-unit RMS trace. `t` and `pu` must have
// equal non-zero length. Runs shorter than half a cycle are ignored.
std::vector<PqRecord> classify_rms(std::span<const double> t, std::span<const double> pu,
                                   double f_nominal, const ClassifierLimits& limits = {});

}  // namespace dvrsim::events
