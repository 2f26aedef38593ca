#include "dvrsim/events.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "dvrsim/error.hpp"

namespace dvrsim::events {

std::string_view to_string(PqKind kind) {
  switch (kind) {
    case PqKind::normal: return "normal";
    case PqKind::sag: return "sag";
    case PqKind::swell: return "swell";
    case PqKind::interruption: return "interruption";
    case PqKind::overvoltage: return "overvoltage";
    case PqKind::undervoltage: return "undervoltage";
  }
  return "unknown";
}

std::string_view to_string(EventKind kind) {
  return kind == EventKind::sag ? "sag" : "swell";
}

std::vector<std::string> validate_schedule(std::span<const VoltageEvent> schedule) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& e = schedule[i];
    const std::string tag = "events[" + std::to_string(i) + "]: ";
    if (!std::isfinite(e.t_start) || !std::isfinite(e.t_end) || !(e.t_start < e.t_end)) {
      out.push_back(tag + "t_start must be before t_end");
    }
    if (e.kind == EventKind::sag && !(e.depth > 0.0 && e.depth < 1.0)) {
      out.push_back(tag + "sag depth must be in (0,1)");
    }
    if (e.kind == EventKind::swell && !(e.depth > 0.0 && std::isfinite(e.depth))) {
      out.push_back(tag + "swell depth must be positive");
    }
    if (!(e.phases[0] || e.phases[1] || e.phases[2])) {
      out.push_back(tag + "event must affect at least one phase");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = schedule[j];
      const bool shared = (e.phases[0] && o.phases[0]) || (e.phases[1] && o.phases[1]) ||
                          (e.phases[2] && o.phases[2]);
      if (shared && e.t_start < o.t_end && o.t_start < e.t_end) {
        out.push_back(tag + "overlaps events[" + std::to_string(j) + "] on a shared phase");
      }
    }
  }
  return out;
}

double source_multiplier(std::span<const VoltageEvent> schedule, double t, Phase phase) {
  const auto k = static_cast<std::size_t>(phase);
  for (const auto& e : schedule) {
    if (e.phases[k] && t >= e.t_start && t < e.t_end) {
      return e.kind == EventKind::sag ? 1.0 - e.depth : 1.0 + e.depth;
    }
  }
  return 1.0;
}

namespace {

enum class Band { low, normal, high };

struct Plateau {
  std::size_t begin;
  std::size_t end;  // exclusive
  double level;
};

// Settled stretches inside [begin, end): consecutive samples whose change
// stays below the slope limit for at least `min_len` samples.
std::vector<Plateau> find_plateaus(std::span<const double> pu, std::size_t begin,
                                   std::size_t end, double max_step, std::size_t min_len) {
  std::vector<Plateau> out;
  std::size_t i = begin;
  while (i < end) {
    std::size_t j = i + 1;
    while (j < end && std::abs(pu[j] - pu[j - 1]) <= max_step) ++j;
    if (j - i >= min_len) {
      double sum = 0.0;
      for (std::size_t k = i; k < j; ++k) sum += pu[k];
      out.push_back({i, j, sum / static_cast<double>(j - i)});
    }
    i = j;
  }
  return out;
}

}  // namespace

std::vector<PqRecord> classify_rms(std::span<const double> t, std::span<const double> pu,
                                   double f_nominal, const ClassifierLimits& lim) {
  if (pu.empty()) throw ValidationError("cannot classify an empty trace");
  if (t.size() != pu.size()) throw ValidationError("time and value columns differ in length");
  if (!(f_nominal > 0.0)) throw ValidationError("nominal frequency must be positive");

  const std::size_t n = pu.size();
  const double dt = n > 1 ? (t[n - 1] - t[0]) / static_cast<double>(n - 1) : 1.0 / f_nominal;
  const double half_cycle = 0.5 / f_nominal;
  const auto per_cycle = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / (f_nominal * dt))));
  const auto half_len = std::max<std::size_t>(1, per_cycle / 2);
  const double max_step = lim.settled_slope_per_cycle / static_cast<double>(per_cycle);

  auto band_of = [&](double v) {
    if (v < lim.sag_below) return Band::low;
    if (v > lim.swell_above) return Band::high;
    return Band::normal;
  };
  auto end_time = [&](std::size_t idx) { return idx < n ? t[idx] : t[n - 1] + dt; };

  std::vector<PqRecord> out;
  std::size_t i = 0;
  while (i < n) {
    const Band band = band_of(pu[i]);
    std::size_t j = i + 1;
    while (j < n && band_of(pu[j]) == band) ++j;
    if (band == Band::normal || end_time(j) - t[i] < half_cycle - 0.25 * dt) {
      i = j;
      continue;
    }

    // Split multi-stage disturbances at the midpoint between settled levels.
    std::vector<std::size_t> cuts{i};
    std::vector<std::pair<std::size_t, std::size_t>> gaps;
    const auto plateaus = find_plateaus(pu, i, j, max_step, half_len);
    for (std::size_t p = 1; p < plateaus.size(); ++p) {
      const auto& prev = plateaus[p - 1];
      const auto& next = plateaus[p];
      if (std::abs(next.level - prev.level) <= lim.stage_step) continue;
      const double mid = 0.5 * (prev.level + next.level);
      std::size_t cut = prev.end;
      while (cut < next.begin && (pu[cut] - mid) * (prev.level - mid) > 0.0) ++cut;
      cuts.push_back(cut);
      gaps.emplace_back(prev.end, next.begin);
    }
    cuts.push_back(j);

    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const std::size_t b = cuts[s];
      const std::size_t e = cuts[s + 1];
      double extremal = band == Band::low ? 2.0 : 0.0;
      bool any = false;
      for (std::size_t k = b; k < e; ++k) {
        const bool in_gap = std::any_of(gaps.begin(), gaps.end(), [k](const auto& g) {
          return k >= g.first && k < g.second;
        });
        if (in_gap) continue;
        extremal = band == Band::low ? std::min(extremal, pu[k]) : std::max(extremal, pu[k]);
        any = true;
      }
      if (!any) {
        for (std::size_t k = b; k < e; ++k) {
          extremal = band == Band::low ? std::min(extremal, pu[k]) : std::max(extremal, pu[k]);
        }
      }
      PqRecord rec;
      rec.t_start = t[b];
      rec.t_end = end_time(e);
      rec.duration = rec.t_end - rec.t_start;
      rec.extremal_pu = extremal;
      if (band == Band::low) {
        if (extremal < lim.interruption_below) {
          rec.kind = PqKind::interruption;
        } else {
          rec.kind = rec.duration <= lim.max_short_duration ? PqKind::sag : PqKind::undervoltage;
        }
      } else {
        rec.kind = rec.duration <= lim.max_short_duration ? PqKind::swell : PqKind::overvoltage;
      }
      out.push_back(rec);
    }
    i = j;
  }
  return out;
}

}  // namespace dvrsim::events
