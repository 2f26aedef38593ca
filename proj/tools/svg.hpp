#pragma once

// Static SVG line plots of a finished trace.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dvrsim/trace.hpp"

namespace dvrsim::cli {

struct Series {
  std::string label;
  std::string color;
  std::span<const double> y;
};

struct Panel {
  std::string y_label;
  std::vector<Series> series;
};

// Panels share the x axis and are stacked vertically. Long series are
// reduced to a min/max envelope per pixel column so spikes survive.
std::string render_plot(const std::string& title, std::span<const double> x,
                        const std::vector<Panel>& panels);

// File names written by write_run_plots for a given stem.
std::vector<std::filesystem::path> plot_paths(const std::filesystem::path& dir,
                                              const std::string& stem);

// RMS overview, grid/load waveforms and the injected DVR voltage.
void write_run_plots(const std::filesystem::path& dir, const std::string& stem,
                     const trace::TraceRecord& tr);

}  // namespace dvrsim::cli
