#pragma once

// Column-oriented simulation trace and the RMS post-processing applied to it.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dvrsim/signals.hpp"

namespace dvrsim::trace {

inline constexpr int kCsvSchemaVersion = 1;

// The fixed, public CSV column set in output order.
const std::vector<std::string>& csv_columns();

// Everything the engine records: the CSV columns followed by diagnostics
// (grid-side line and DER currents, identity residuals, turbine torque).
const std::vector<std::string>& engine_columns();

class TraceRecord {
 public:
  TraceRecord() = default;
  explicit TraceRecord(std::vector<std::string> names);

  void reserve(std::size_t rows);
  // `row` must have one value per column.
  void append(std::span<const double> row);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<std::size_t> index(std::string_view name) const;
  // Throws std::out_of_range for an unknown name.
  std::span<const double> column(std::string_view name) const;
  std::span<double> column(std::string_view name);
  std::span<const double> column(std::size_t i) const { return data_[i]; }
  std::span<double> column(std::size_t i) { return data_[i]; }

  // Copy restricted to `names`, in that order.
  TraceRecord select(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> data_;
  std::size_t rows_ = 0;
};

struct RmsChannels {
  std::vector<double> grid;
  std::vector<double> dvr;
  std::vector<double> load;
  std::vector<double> wind;  // at the turbine terminal, i.e. the load bus
};

// One-period sliding RMS per phase (window starts empty), averaged over the
// three phases and divided by the phase RMS base. Needs the v_grid_*,
// v_dvr_* and v_load_* columns and uniformly spaced rows.
RmsChannels rms_channels(const TraceRecord& trace, const signals::PerUnitBase& base);

// Fills the rms_*_pu columns in place.
void write_rms_channels(TraceRecord& trace, const signals::PerUnitBase& base);

}  // namespace dvrsim::trace
