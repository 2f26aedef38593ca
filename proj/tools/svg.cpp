#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>


namespace dvrsim::cli {

namespace {

constexpr double kWidth = 900.0;
constexpr double kPanelHeight = 220.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kGap = 45.0;

std::string num(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(4);
  os << x;
  return os.str();
}

// Roughly 5 "nice" ticks across [lo, hi].
std::vector<double> ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    out.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return out;
}

}  // namespace

std::string render_plot(const std::string& title, std::span<const double> x,
                        const std::vector<Panel>& panels) {
  if (x.size() < 2) throw std::invalid_argument("plot needs at least two points");
  const double plot_w = kWidth - kLeft - kRight;
  const double height = kTop + panels.size() * (kPanelHeight + kGap) + 10.0;
  const double x0 = x.front();
  const double x1 = x.back();
  auto sx = [&](double v) { return kLeft + (v - x0) / (x1 - x0) * plot_w; };

  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title
     << "</text>\n";

  const auto columns = static_cast<std::size_t>(plot_w);
  for (std::size_t p = 0; p < panels.size(); ++p) {
    const Panel& panel = panels[p];
    const double top = kTop + p * (kPanelHeight + kGap);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : panel.series) {
      for (double v : s.y) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto sy = [&](double v) { return top + (hi - v) / (hi - lo) * kPanelHeight; };

    os << "<rect x=\"" << kLeft << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
       << kPanelHeight << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (double v : ticks(lo, hi)) {
      os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << sy(v)
         << "\" y2=\"" << sy(v) << "\" stroke=\"#ddd\"/>";
      os << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">"
         << num(v) << "</text>\n";
    }
    for (double v : ticks(x0, x1)) {
      os << "<line x1=\"" << sx(v) << "\" x2=\"" << sx(v) << "\" y1=\"" << top << "\" y2=\""
         << top + kPanelHeight << "\" stroke=\"#eee\"/>";
      os << "<text x=\"" << sx(v) << "\" y=\"" << top + kPanelHeight + 15
         << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    }
    os << "<text x=\"18\" y=\"" << top + kPanelHeight / 2 << "\" text-anchor=\"middle\" "
       << "transform=\"rotate(-90 18 " << top + kPanelHeight / 2 << ")\">" << panel.y_label
       << "</text>\n";
    os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << top + kPanelHeight + 32
       << "\" text-anchor=\"middle\">time (s)</text>\n";

    for (std::size_t k = 0; k < panel.series.size(); ++k) {
      const Series& s = panel.series[k];
      os << "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" << s.color << "\" points=\"";
      const std::size_t n = s.y.size();
      if (n <= 2 * columns) {
        for (std::size_t i = 0; i < n; ++i) os << sx(x[i]) << ',' << sy(s.y[i]) << ' ';
      } else {
        for (std::size_t c = 0; c < columns; ++c) {
          const std::size_t a = c * n / columns;
          const std::size_t b = (c + 1) * n / columns;
          const auto [mn, mx] = std::minmax_element(s.y.begin() + a, s.y.begin() + b);
          // Keep the temporal order of the two extremes.
          const auto first = std::min(mn, mx), second = std::max(mn, mx);
          os << sx(x[first - s.y.begin()]) << ',' << sy(*first) << ' ';
          os << sx(x[second - s.y.begin()]) << ',' << sy(*second) << ' ';
        }
      }
      os << "\"/>\n";
      const double ly = top + 14 + 18 * k;
      os << "<line x1=\"" << kLeft + plot_w + 12 << "\" x2=\"" << kLeft + plot_w + 32 << "\" y1=\""
         << ly - 4 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << s.color
         << "\" stroke-width=\"2\"/><text x=\"" << kLeft + plot_w + 38 << "\" y=\"" << ly << "\">"
         << s.label << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> plot_paths(const std::filesystem::path& dir,
                                              const std::string& stem) {
  return {dir / (stem + "_rms.svg"), dir / (stem + "_waveforms.svg"), dir / (stem + "_dvr.svg")};
}

void write_run_plots(const std::filesystem::path& dir, const std::string& stem,
                     const trace::TraceRecord& tr) {
  const auto paths = plot_paths(dir, stem);
  const auto t = tr.column("t");
  auto put = [](const std::filesystem::path& p, const std::string& svg) {
    std::ofstream f(p, std::ios::binary);
    if (!(f << svg)) throw std::runtime_error("cannot write " + p.string());
  };
  auto phases = [&](const std::string& prefix, const std::string& label) {
    return Panel{label + " (V)",
                 {{"phase a", "#1f77b4", tr.column(prefix + "a")},
                  {"phase b", "#d62728", tr.column(prefix + "b")},
                  {"phase c", "#2ca02c", tr.column(prefix + "c")}}};
  };

  put(paths[0], render_plot(stem + ": RMS voltages", t,
                            {{"grid (pu)", {{"grid", "#1f77b4", tr.column("rms_grid_pu")}}},
                             {"DVR (pu)", {{"DVR", "#9467bd", tr.column("rms_dvr_pu")}}},
                             {"load (pu)", {{"load", "#2ca02c", tr.column("rms_load_pu")}}},
                             {"wind (pu)", {{"wind", "#ff7f0e", tr.column("rms_wind_pu")}}}}));
  put(paths[1], render_plot(stem + ": grid and load voltages", t,
                            {phases("v_grid_", "grid"), phases("v_load_", "load")}));
  put(paths[2], render_plot(stem + ": injected DVR voltage", t, {phases("v_dvr_", "DVR")}));
}

}  // namespace dvrsim::cli
