#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "csv.hpp"
#include "dvrsim/engine.hpp"
#include "dvrsim/error.hpp"
#include "dvrsim/events.hpp"
#include "dvrsim/pv.hpp"
#include "dvrsim/scenario.hpp"
#include "svg.hpp"

namespace dvrsim::cli {

namespace fs = std::filesystem;

fs::path resolve_scenario(std::string_view arg) {
  const fs::path p(arg);
  for (const fs::path& dir : {fs::path{}, fs::path{DVRSIM_SCENARIO_DIR}}) {
    if (!dir.empty() && p.is_absolute()) break;
    for (fs::path cand : {dir / p, dir / fs::path(std::string(arg) + ".json")}) {
      std::error_code ec;
      if (fs::is_regular_file(cand, ec)) return cand;
    }
  }
  throw std::runtime_error("scenario '" + std::string(arg) + "' not found");
}

fs::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  if (env && *env) return env;
  return "dvrsim-out";
}

namespace {

struct RunOptions {
  std::vector<std::string> scenarios;
  std::vector<std::string> sets;
  std::string output_dir;
  bool no_dvr = false;
  bool plot = true;
  bool force = false;
  int jobs = 1;
};

std::vector<Override> parse_overrides(const std::vector<std::string>& sets) {
  std::vector<Override> out;
  for (const auto& s : sets) out.push_back(parse_override(s));
  return out;
}

// Shared error mapping for everything that loads or runs a scenario.
template <class F>
int guarded(std::ostream& err, const std::string& context, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    err << context << ": " << e.what() << '\n';
    return kValidation;
  } catch (const NumericalError& e) {
    err << context << ": numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    err << context << ": " << e.what() << '\n';
    return kUsage;
  }
}

int report_violations(const Scenario& s, const std::string& context, std::ostream& err) {
  const auto v = validate(s);
  if (v.empty()) return kOk;
  err << context << ": " << v.size() << " violation" << (v.size() == 1 ? "" : "s") << '\n';
  for (const auto& msg : v) err << "  - " << msg << '\n';
  return kValidation;
}

std::vector<std::string> csv_selection(const Scenario& s) {
  const auto& all = trace::csv_columns();
  if (s.record.empty()) return all;
  std::vector<std::string> out{"t"};
  for (const auto& c : all) {
    if (c != "t" && std::find(s.record.begin(), s.record.end(), c) != s.record.end()) {
      out.push_back(c);
    }
  }
  return out;
}

int run_one(const std::string& arg, const RunOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, arg, [&] {
    const fs::path path = resolve_scenario(arg);
    auto overrides = parse_overrides(opt.sets);
    if (opt.no_dvr) overrides.emplace_back("dvr.enabled", "false");
    const Scenario s = load_scenario(path, overrides);
    if (int rc = report_violations(s, arg, err)) return rc;

    const fs::path dir = opt.output_dir.empty() ? default_output_dir() : fs::path(opt.output_dir);
    const std::string stem = s.name + (opt.no_dvr ? "_nodvr" : "");
    const fs::path csv = dir / (stem + ".csv");
    std::vector<fs::path> targets{csv};
    if (opt.plot) {
      for (auto& p : plot_paths(dir, stem)) targets.push_back(p);
    }
    if (!opt.force) {
      for (const auto& p : targets) {
        if (fs::exists(p)) {
          err << arg << ": " << p.string() << " exists; pass --force to overwrite\n";
          return static_cast<int>(kUsage);
        }
      }
    }
    fs::create_directories(dir);

    const trace::TraceRecord tr = run(s);
    {
      std::ofstream f(csv, std::ios::binary);
      write_csv(f, tr.select(csv_selection(s)), s.name);
      if (!f) throw std::runtime_error("cannot write " + csv.string());
    }
    if (opt.plot) write_run_plots(dir, stem, tr);
    out << "wrote " << csv.string() << " (" << tr.rows() << " rows)";
    if (opt.plot) out << " and " << targets.size() - 1 << " plots";
    out << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const std::size_t n = opt.scenarios.size();
  std::vector<std::ostringstream> outs(n), errs(n);
  std::vector<int> codes(n, kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) codes[i] = run_one(opt.scenarios[i], opt, outs[i], errs[i]);
  };
  const auto workers = static_cast<std::size_t>(std::clamp(opt.jobs, 1, 64));
  if (workers == 1 || n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(workers, n); ++k) pool.emplace_back(worker);
  }
  int rc = kOk;
  for (std::size_t i = 0; i < n; ++i) {
    out << outs[i].str();
    err << errs[i].str();
    if (rc == kOk) rc = codes[i];
  }
  return rc;
}

int cmd_validate(const std::vector<std::string>& files, const std::vector<std::string>& sets,
                 std::ostream& out, std::ostream& err) {
  int rc = kOk;
  for (const auto& arg : files) {
    const int one = guarded(err, arg, [&] {
      const Scenario s = load_scenario(resolve_scenario(arg), parse_overrides(sets));
      if (int r = report_violations(s, arg, err)) return r;
      out << arg << ": ok\n";
      return static_cast<int>(kOk);
    });
    if (rc == kOk) rc = one;
  }
  return rc;
}

int cmd_classify(const std::string& file, const std::string& channel, double f_nominal,
                 double skip_cycles, std::ostream& out, std::ostream& err) {
  return guarded(err, file, [&] {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file);
    const trace::TraceRecord tr = read_csv(in);
    auto t = tr.column("t");
    auto x = tr.column(channel);
    if (t.size() < 2) throw ValidationError("trace has fewer than two rows");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    auto skip = static_cast<std::size_t>(std::llround(skip_cycles / f_nominal / dt));
    skip = std::min(skip, t.size() - 1);
    const auto records = events::classify_rms(t.subspan(skip), x.subspan(skip), f_nominal);
    out << "# " << file << " channel=" << channel << " records=" << records.size() << '\n';
    out << "kind,t_start,t_end,duration,extremal_pu\n";
    for (const auto& r : records) {
      out << events::to_string(r.kind) << ',' << format_double(r.t_start) << ','
          << format_double(r.t_end) << ',' << format_double(r.duration) << ','
          << format_double(r.extremal_pu) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_pv_curve(const std::string& scenario, const std::vector<std::string>& sets,
                 std::size_t points, const std::string& output, bool force, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, "pv-curve", [&] {
    const auto overrides = parse_overrides(sets);
    const Scenario s = scenario.empty() ? scenario_from_json(scenario_to_json(Scenario{}), overrides)
                                        : load_scenario(resolve_scenario(scenario), overrides);
    const pv::PvModel& m = s.pv.model;
    m.validate();
    if (points < 2) throw ValidationError("need at least two points");
    const double v_oc = m.open_circuit_voltage();
    const pv::MppPoint mpp = pv::mpp_bruteforce(m, 100000);

    std::ostringstream os;
    os << "# v_oc=" << format_double(v_oc) << " v_mpp=" << format_double(mpp.v)
       << " p_mpp=" << format_double(mpp.p) << '\n';
    os << "v,i,p\n";
    for (std::size_t k = 0; k < points; ++k) {
      const double v = v_oc * static_cast<double>(k) / static_cast<double>(points - 1);
      const double i = pv::pv_current(m, v);
      os << format_double(v) << ',' << format_double(i) << ',' << format_double(v * i) << '\n';
    }
    if (output.empty() || output == "-") {
      out << os.str();
      return static_cast<int>(kOk);
    }
    if (!force && fs::exists(output)) {
      err << "pv-curve: " << output << " exists; pass --force to overwrite\n";
      return static_cast<int>(kUsage);
    }
    std::ofstream f(output, std::ios::binary);
    if (!(f << os.str())) throw std::runtime_error("cannot write " + output);
    return static_cast<int>(kOk);
  });
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distribution feeder simulator with a dynamic voltage restorer", "dvrsim"};
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Simulate scenarios and write CSV traces and SVG plots");
  run->add_option("scenario", run_opt.scenarios, "Scenario file or bundled name")->required();
  run->add_option("-o,--output-dir", run_opt.output_dir,
                  std::string("Output directory (default: $") + kOutputDirEnv + " or ./dvrsim-out)");
  run->add_option("--set", run_opt.sets, "Override a scenario value, e.g. dvr.kp=8");
  run->add_flag("--no-dvr", run_opt.no_dvr, "Keep the DVR bypassed for the whole run");
  run->add_flag("--plot,!--no-plot", run_opt.plot, "Write SVG plots (default on)");
  run->add_flag("--force", run_opt.force, "Overwrite existing output files");
  run->add_option("-j,--jobs", run_opt.jobs, "Scenarios simulated in parallel")->check(CLI::Range(1, 64));

  std::string csv_file, channel = "rms_load_pu";
  double f_nominal = 50.0, skip_cycles = 1.0;
  auto* classify = app.add_subcommand("classify", "Report IEEE-1159 events in an RMS channel of a trace CSV");
  classify->add_option("csv", csv_file, "Trace CSV written by 'run'")->required();
  classify->add_option("-c,--channel", channel, "Per-unit RMS column to classify")->capture_default_str();
  classify->add_option("-f,--frequency", f_nominal, "Nominal frequency in Hz")->capture_default_str();
  classify->add_option("--skip-cycles", skip_cycles, "Leading cycles to ignore (RMS window fill)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  std::vector<std::string> validate_files, validate_sets;
  auto* validate_cmd = app.add_subcommand("validate", "Check scenario files without running them");
  validate_cmd->add_option("scenario", validate_files, "Scenario file or bundled name")->required();
  validate_cmd->add_option("--set", validate_sets, "Override a scenario value");

  std::string pv_scenario, pv_output;
  std::vector<std::string> pv_sets;
  std::size_t pv_points = 200;
  bool pv_force = false;
  auto* pv_cmd = app.add_subcommand("pv-curve", "Write the I-V and P-V curve of the PV model as CSV");
  pv_cmd->add_option("-s,--scenario", pv_scenario, "Take the PV model from this scenario");
  pv_cmd->add_option("--set", pv_sets, "Override a scenario value, e.g. pv.g=800");
  pv_cmd->add_option("-n,--points", pv_points, "Number of voltage points")->capture_default_str();
  pv_cmd->add_option("-o,--output", pv_output, "Output file (default: standard output)");
  pv_cmd->add_flag("--force", pv_force, "Overwrite an existing output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  if (*run) return cmd_run(run_opt, out, err);
  if (*classify) return cmd_classify(csv_file, channel, f_nominal, skip_cycles, out, err);
  if (*validate_cmd) return cmd_validate(validate_files, validate_sets, out, err);
  return cmd_pv_curve(pv_scenario, pv_sets, pv_points, pv_output, pv_force, out, err);
}

}  // namespace dvrsim::cli
