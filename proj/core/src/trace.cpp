#include "dvrsim/trace.hpp"

#include <algorithm>
#include <stdexcept>

#include "dvrsim/error.hpp"

namespace dvrsim::trace {

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "t",           "v_grid_a",    "v_grid_b",    "v_grid_c",    "v_dvr_a",    "v_dvr_b",
      "v_dvr_c",     "v_load_a",    "v_load_b",    "v_load_c",    "i_load_a",   "i_load_b",
      "i_load_c",    "rms_grid_pu", "rms_dvr_pu",  "rms_load_pu", "rms_wind_pu", "omega_r",
      "t_em",        "v_pv",        "p_pv",        "duty_mag",    "bypass"};
  return cols;
}

const std::vector<std::string>& engine_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = csv_columns();
    for (const char* extra :
         {"i_grid_a", "i_grid_b", "i_grid_c", "i_wind_a", "i_wind_b", "i_wind_c", "i_pv_a",
          "i_pv_b", "i_pv_c", "e_src_a", "e_src_b", "e_src_c", "kvl_residual", "kcl_residual",
          "t_g"}) {
      c.emplace_back(extra);
    }
    return c;
  }();
  return cols;
}

TraceRecord::TraceRecord(std::vector<std::string> names)
    : names_(std::move(names)), data_(names_.size()) {}

void TraceRecord::reserve(std::size_t rows) {
  for (auto& c : data_) c.reserve(rows);
}

void TraceRecord::append(std::span<const double> row) {
  if (row.size() != data_.size()) throw std::invalid_argument("trace row has the wrong width");
  for (std::size_t i = 0; i < row.size(); ++i) data_[i].push_back(row[i]);
  ++rows_;
}

std::optional<std::size_t> TraceRecord::index(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::span<const double> TraceRecord::column(std::string_view name) const {
  auto i = index(name);
  if (!i) throw std::out_of_range("no trace column '" + std::string(name) + "'");
  return data_[*i];
}

std::span<double> TraceRecord::column(std::string_view name) {
  auto i = index(name);
  if (!i) throw std::out_of_range("no trace column '" + std::string(name) + "'");
  return data_[*i];
}

TraceRecord TraceRecord::select(const std::vector<std::string>& names) const {
  TraceRecord out(names);
  for (std::size_t k = 0; k < names.size(); ++k) {
    auto src = column(names[k]);
    out.data_[k].assign(src.begin(), src.end());
  }
  out.rows_ = rows_;
  return out;
}

namespace {

std::vector<double> bus_rms(const TraceRecord& tr, const std::string& prefix, std::size_t n,
                            double base) {
  std::span<const double> ph[3] = {tr.column(prefix + "a"), tr.column(prefix + "b"),
                                   tr.column(prefix + "c")};
  signals::SlidingRms rms[3] = {signals::SlidingRms(n), signals::SlidingRms(n),
                                signals::SlidingRms(n)};
  std::vector<double> out(tr.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double sum = rms[0].push(ph[0][i]) + rms[1].push(ph[1][i]) + rms[2].push(ph[2][i]);
    out[i] = sum / 3.0 / base;
  }
  return out;
}

}  // namespace

RmsChannels rms_channels(const TraceRecord& trace, const signals::PerUnitBase& base) {
  auto t = trace.column("t");
  if (t.size() < 2) {
    throw ValidationError("trace needs at least two rows for RMS post-processing");
  }
  const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  const std::size_t n = signals::window_length(base.f_nominal, dt);
  const double vb = base.v_phase_rms();
  RmsChannels out;
  out.grid = bus_rms(trace, "v_grid_", n, vb);
  out.dvr = bus_rms(trace, "v_dvr_", n, vb);
  out.load = bus_rms(trace, "v_load_", n, vb);
  out.wind = out.load;
  return out;
}

void write_rms_channels(TraceRecord& trace, const signals::PerUnitBase& base) {
  RmsChannels r = rms_channels(trace, base);
  auto put = [&](const char* name, const std::vector<double>& v) {
    auto col = trace.column(name);
    std::copy(v.begin(), v.end(), col.begin());
  };
  put("rms_grid_pu", r.grid);
  put("rms_dvr_pu", r.dvr);
  put("rms_load_pu", r.load);
  put("rms_wind_pu", r.wind);
}

}  // namespace dvrsim::trace
