#include "dvrsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dvrsim/error.hpp"
#include "dvrsim/trace.hpp"
#include "json.hpp"

namespace dvrsim {

using nlohmann::json;

std::size_t Scenario::steps() const {
  return static_cast<std::size_t>(std::llround(solver.t_end / solver.dt));
}

namespace {

// Reads one JSON object, rejecting keys it was not asked about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ValidationError(path_ + "." + key + ": unknown key");
    }
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      throw ValidationError(path_ + "." + key + ": wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::array<bool, 3> parse_phases(const std::string& text, const std::string& path) {
  std::array<bool, 3> out{false, false, false};
  for (char ch : text) {
    if (ch < 'a' || ch > 'c') throw ValidationError(path + ".phases: expected letters from 'abc'");
    out[static_cast<std::size_t>(ch - 'a')] = true;
  }
  return out;
}

std::string phases_text(const std::array<bool, 3>& p) {
  std::string s;
  for (int k = 0; k < 3; ++k) {
    if (p[k]) s.push_back(static_cast<char>('a' + k));
  }
  return s;
}

void apply_override(json& doc, const Override& ov) {
  json* node = &doc;
  std::string_view key = ov.first;
  while (!key.empty()) {
    const auto dot = key.find('.');
    const std::string token(key.substr(0, dot));
    key = dot == std::string_view::npos ? std::string_view{} : key.substr(dot + 1);
    if (token.empty()) throw ValidationError("override key '" + ov.first + "' is malformed");
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(token);
      } catch (const std::exception&) {
        throw ValidationError("override key '" + ov.first + "': expected an array index");
      }
      if (idx >= node->size()) throw ValidationError("override key '" + ov.first + "': index out of range");
      node = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ValidationError("override key '" + ov.first + "' does not name an object");
      node = &(*node)[token];
    }
  }
  json value = json::parse(ov.second, nullptr, false);
  *node = value.is_discarded() ? json(ov.second) : value;
}

void decode(const json& doc, Scenario& s) {
  Section root(doc, "scenario");
  if (!doc.contains("schema_version")) throw ValidationError("scenario.schema_version: missing");
  root.get("schema_version", s.schema_version);
  root.get("name", s.name);
  if (const json* j = root.child("bases")) {
    Section b(*j, "bases");
    b.get("v_base_ll", s.bases.v_base_ll);
    b.get("s_base_va", s.bases.s_base);
    b.get("f_nominal", s.bases.f_nominal);
  }
  if (const json* j = root.child("source")) {
    Section b(*j, "source");
    b.get("v_ll", s.source.v_ll);
    std::string mode = s.source.emf == EmfMode::nominal ? "nominal" : "flat_bus";
    b.get("emf", mode);
    if (mode == "nominal") {
      s.source.emf = EmfMode::nominal;
    } else if (mode == "flat_bus") {
      s.source.emf = EmfMode::flat_bus;
    } else {
      throw ValidationError("source.emf: expected 'nominal' or 'flat_bus'");
    }
  }
  if (const json* j = root.child("transformer")) {
    Section b(*j, "transformer");
    b.get("v1_ll", s.transformer.v1_ll);
    b.get("v2_ll", s.transformer.v2_ll);
    std::string conn = "Yg-Yg";
    b.get("connection", conn);
    if (conn != "Yg-Yg") throw ValidationError("transformer.connection: only Yg-Yg is modelled");
  }
  if (const json* j = root.child("z_th")) {
    Section b(*j, "z_th");
    b.get("pu", s.z_th.pu);
    b.get("x_over_r", s.z_th.x_over_r);
    b.get("s_base_va", s.z_th.s_base_va);
  }
  if (const json* j = root.child("load")) {
    Section b(*j, "load");
    b.get("p_w", s.load.p_w);
    b.get("q_var", s.load.q_var);
  }
  if (const json* j = root.child("wind")) {
    Section b(*j, "wind");
    b.get("present", s.wind.present);
    b.get("rho", s.wind.aero.rho);
    b.get("radius", s.wind.aero.radius);
    b.get("cp", s.wind.aero.cp);
    b.get("v_w", s.wind.aero.v_w);
    if (const json* m = b.child("machine")) {
      Section mm(*m, "wind.machine");
      auto& p = s.wind.machine;
      mm.get("r_s", p.r_s);
      mm.get("r_r", p.r_r);
      mm.get("l_ls", p.l_ls);
      mm.get("l_lr", p.l_lr);
      mm.get("l_m", p.l_m);
      mm.get("pole_pairs", p.pole_pairs);
      mm.get("j_r", p.j_r);
    }
  }
  if (const json* j = root.child("pv")) {
    Section b(*j, "pv");
    auto& m = s.pv.model;
    b.get("present", s.pv.present);
    b.get("i_pv", m.i_pv);
    b.get("i_0", m.i_0);
    b.get("alpha", m.alpha);
    b.get("t_cell", m.t_cell);
    b.get("n_cell", m.n_cell);
    b.get("g", m.g);
    b.get("mppt_step_fraction", s.pv.mppt_step_fraction);
    b.get("v_init_fraction", s.pv.v_init_fraction);
  }
  if (const json* j = root.child("dvr")) {
    Section b(*j, "dvr");
    auto& d = s.dvr;
    b.get("present", d.present);
    b.get("enabled", d.enabled);
    b.get("v_dc", d.v_dc);
    b.get("ratio", d.ratio);
    b.get("kp", d.kp);
    b.get("ki", d.ki);
    b.get("bidirectional", d.bidirectional);
    b.get("bypass_limit_pu", d.bypass_limit_pu);
    b.get("rearm_fraction", d.rearm_fraction);
    if (const json* f = b.child("filter")) {
      Section ff(*f, "dvr.filter");
      ff.get("l_h", d.filter_l);
      ff.get("r_ohm", d.filter_r);
      ff.get("c_f", d.filter_c);
    }
  }
  if (const json* j = root.child("events")) {
    if (!j->is_array()) throw ValidationError("events: expected an array");
    s.events.clear();
    for (std::size_t i = 0; i < j->size(); ++i) {
      Section e((*j)[i], "events[" + std::to_string(i) + "]");
      events::VoltageEvent ev;
      std::string kind = "sag";
      std::string phases = "abc";
      e.get("kind", kind);
      e.get("t_start", ev.t_start);
      e.get("t_end", ev.t_end);
      e.get("depth", ev.depth);
      e.get("phases", phases);
      if (kind == "sag") {
        ev.kind = events::EventKind::sag;
      } else if (kind == "swell") {
        ev.kind = events::EventKind::swell;
      } else {
        throw ValidationError(e.path() + ".kind: expected 'sag' or 'swell'");
      }
      ev.phases = parse_phases(phases, e.path());
      s.events.push_back(ev);
    }
  }
  if (const json* j = root.child("solver")) {
    Section b(*j, "solver");
    b.get("dt", s.solver.dt);
    b.get("t_end", s.solver.t_end);
  }
  if (const json* j = root.child("record")) {
    Section b(*j, "record");
    b.get("channels", s.record);
  }
}

void check(std::vector<std::string>& out, bool ok, const char* msg) {
  if (!ok) out.emplace_back(msg);
}

template <class F>
void check_throws(std::vector<std::string>& out, const std::string& prefix, F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    out.push_back(prefix + e.what());
  }
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> v;
  check(v, s.schema_version == kScenarioSchemaVersion, "unsupported schema_version");
  check(v, positive(s.bases.v_base_ll), "voltage base must be positive");
  check(v, positive(s.bases.s_base), "power base must be positive");
  check(v, positive(s.bases.f_nominal), "nominal frequency must be positive");
  check(v, positive(s.solver.dt), "dt must be positive");
  check(v, std::isfinite(s.solver.t_end) && s.solver.t_end >= s.solver.dt, "t_end must be at least dt");
  if (positive(s.solver.dt) && positive(s.bases.f_nominal)) {
    check_throws(v, "", [&] { signals::window_length(s.bases.f_nominal, s.solver.dt); });
  }
  check(v, positive(s.source.v_ll), "source voltage must be positive");
  check(v, positive(s.transformer.v1_ll) && positive(s.transformer.v2_ll),
        "transformer voltages must be positive");
  check(v, positive(s.z_th.pu), "source impedance must be positive");
  check(v, positive(s.z_th.x_over_r), "source X/R must be positive");
  check(v, positive(s.z_th.s_base_va), "source impedance base must be positive");
  check(v, positive(s.load.p_w), "load active power must be positive");
  check(v, std::isfinite(s.load.q_var) && s.load.q_var >= 0.0, "load reactive power must be non-negative");
  if (s.wind.present) {
    check_throws(v, "wind: ", [&] { s.wind.aero.validate(); });
    check_throws(v, "wind: ", [&] { s.wind.machine.validate(); });
  }
  if (s.pv.present) {
    check_throws(v, "pv: ", [&] { s.pv.model.validate(); });
    check(v, s.pv.mppt_step_fraction > 0.0 && s.pv.mppt_step_fraction < 0.5,
          "pv: MPPT step fraction must be in (0, 0.5)");
    check(v, s.pv.v_init_fraction >= 0.0 && s.pv.v_init_fraction <= 1.0,
          "pv: initial voltage fraction must be in [0, 1]");
  }
  if (s.dvr.present) {
    check(v, positive(s.dvr.v_dc), "dvr: DC voltage must be positive");
    check(v, positive(s.dvr.filter_l), "dvr: filter inductance must be positive");
    check(v, positive(s.dvr.filter_c), "dvr: filter capacitance must be positive");
    check(v, std::isfinite(s.dvr.filter_r) && s.dvr.filter_r >= 0.0, "dvr: filter resistance must be non-negative");
    check(v, positive(s.dvr.ratio), "dvr: injection ratio must be positive");
    check(v, std::isfinite(s.dvr.kp) && s.dvr.kp >= 0.0, "dvr: kp must be non-negative");
    check(v, std::isfinite(s.dvr.ki) && s.dvr.ki >= 0.0, "dvr: ki must be non-negative");
    check(v, positive(s.dvr.bypass_limit_pu), "dvr: bypass limit must be positive");
    check(v, s.dvr.rearm_fraction > 0.0 && s.dvr.rearm_fraction <= 1.0,
          "dvr: re-arm fraction must be in (0, 1]");
  }
  for (auto& msg : events::validate_schedule(s.events)) v.push_back(std::move(msg));
  for (const auto& ch : s.record) {
    const auto& cols = trace::csv_columns();
    if (std::find(cols.begin(), cols.end(), ch) == cols.end()) {
      v.push_back("record: unknown channel '" + ch + "'");
    }
  }
  return v;
}

Override parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError("override '" + std::string(text) + "' must look like key=value");
  }
  auto trim = [](std::string_view x) {
    while (!x.empty() && std::isspace(static_cast<unsigned char>(x.front()))) x.remove_prefix(1);
    while (!x.empty() && std::isspace(static_cast<unsigned char>(x.back()))) x.remove_suffix(1);
    return std::string(x);
  };
  Override ov{trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
  if (ov.first.empty()) throw ValidationError("override key is empty");
  return ov;
}

Scenario scenario_from_json(std::string_view json_text, const std::vector<Override>& overrides) {
  json doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("scenario is not valid JSON");
  for (const auto& ov : overrides) apply_override(doc, ov);
  Scenario s;
  decode(doc, s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Scenario s = scenario_from_json(ss.str(), overrides);
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["schema_version"] = s.schema_version;
  j["name"] = s.name;
  j["bases"] = {{"v_base_ll", s.bases.v_base_ll}, {"s_base_va", s.bases.s_base},
                {"f_nominal", s.bases.f_nominal}};
  j["source"] = {{"v_ll", s.source.v_ll},
                 {"emf", s.source.emf == EmfMode::nominal ? "nominal" : "flat_bus"}};
  j["transformer"] = {{"v1_ll", s.transformer.v1_ll}, {"v2_ll", s.transformer.v2_ll},
                      {"connection", "Yg-Yg"}};
  j["z_th"] = {{"pu", s.z_th.pu}, {"x_over_r", s.z_th.x_over_r}, {"s_base_va", s.z_th.s_base_va}};
  j["load"] = {{"p_w", s.load.p_w}, {"q_var", s.load.q_var}};
  const auto& m = s.wind.machine;
  j["wind"] = {{"present", s.wind.present},
               {"rho", s.wind.aero.rho},
               {"radius", s.wind.aero.radius},
               {"cp", s.wind.aero.cp},
               {"v_w", s.wind.aero.v_w},
               {"machine",
                {{"r_s", m.r_s},
                 {"r_r", m.r_r},
                 {"l_ls", m.l_ls},
                 {"l_lr", m.l_lr},
                 {"l_m", m.l_m},
                 {"pole_pairs", m.pole_pairs},
                 {"j_r", m.j_r}}}};
  const auto& pm = s.pv.model;
  j["pv"] = {{"present", s.pv.present},       {"i_pv", pm.i_pv},
             {"i_0", pm.i_0},                 {"alpha", pm.alpha},
             {"t_cell", pm.t_cell},           {"n_cell", pm.n_cell},
             {"g", pm.g},                     {"mppt_step_fraction", s.pv.mppt_step_fraction},
             {"v_init_fraction", s.pv.v_init_fraction}};
  const auto& d = s.dvr;
  j["dvr"] = {{"present", d.present},
              {"enabled", d.enabled},
              {"v_dc", d.v_dc},
              {"filter", {{"l_h", d.filter_l}, {"r_ohm", d.filter_r}, {"c_f", d.filter_c}}},
              {"ratio", d.ratio},
              {"kp", d.kp},
              {"ki", d.ki},
              {"bidirectional", d.bidirectional},
              {"bypass_limit_pu", d.bypass_limit_pu},
              {"rearm_fraction", d.rearm_fraction}};
  j["events"] = json::array();
  for (const auto& e : s.events) {
    j["events"].push_back({{"kind", std::string(events::to_string(e.kind))},
                           {"t_start", e.t_start},
                           {"t_end", e.t_end},
                           {"depth", e.depth},
                           {"phases", phases_text(e.phases)}});
  }
  j["solver"] = {{"dt", s.solver.dt}, {"t_end", s.solver.t_end}};
  j["record"] = {{"channels", s.record}};
  return j.dump(2);
}

}  // namespace dvrsim
