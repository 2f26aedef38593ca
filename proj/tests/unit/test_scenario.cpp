#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <string>

#include "dvrsim/error.hpp"
#include "dvrsim/scenario.hpp"

namespace dvrsim {
namespace {

const std::filesystem::path kScenarioDir = DVRSIM_TEST_SCENARIO_DIR;

bool contains(const std::vector<std::string>& v, const std::string& needle) {
  return std::any_of(v.begin(), v.end(),
                     [&](const std::string& s) { return s.find(needle) != std::string::npos; });
}

TEST(Validate, DefaultsAreRunnable) {
  EXPECT_TRUE(validate(Scenario{}).empty());
}

TEST(Validate, LargeFilterInductanceIsAllowed) {
  Scenario s;
  s.dvr.filter_l = 50e-3;
  EXPECT_TRUE(validate(s).empty());
}

TEST(Validate, ZeroStep) {
  Scenario s;
  s.solver.dt = 0.0;
  EXPECT_TRUE(contains(validate(s), "dt must be positive"));
}

TEST(Validate, SagDepthOutOfRange) {
  Scenario s;
  s.events.push_back({0.2, 0.4, events::EventKind::sag, 1.5, {true, true, true}});
  EXPECT_TRUE(contains(validate(s), "sag depth must be in (0,1)"));
}

TEST(Validate, ReportsEveryViolation) {
  Scenario s;
  s.solver.dt = 0.0;
  s.load.p_w = -5.0;
  s.dvr.v_dc = 0.0;
  s.record = {"nonsense"};
  const auto v = validate(s);
  EXPECT_TRUE(contains(v, "dt must be positive"));
  EXPECT_TRUE(contains(v, "load active power must be positive"));
  EXPECT_TRUE(contains(v, "DC voltage must be positive"));
  EXPECT_TRUE(contains(v, "unknown channel 'nonsense'"));
}

TEST(Validate, AbsentComponentsAreNotChecked) {
  Scenario s;
  s.wind.present = false;
  s.wind.aero.cp = 0.9;
  s.dvr.present = false;
  s.dvr.v_dc = -1.0;
  EXPECT_TRUE(validate(s).empty());
}

TEST(Steps, RowArithmetic) {
  Scenario s;
  s.solver.dt = 50e-6;
  s.solver.t_end = 1.0;
  EXPECT_EQ(s.steps(), 20000u);
}

TEST(Json, MinimalDocumentTakesDefaults) {
  const Scenario s = scenario_from_json(R"({"schema_version": 1})");
  EXPECT_EQ(s.dvr.kp, Scenario{}.dvr.kp);
  EXPECT_TRUE(validate(s).empty());
}

TEST(Json, SchemaVersionIsRequiredAndChecked) {
  EXPECT_THROW(scenario_from_json("{}"), ValidationError);
  EXPECT_FALSE(validate(scenario_from_json(R"({"schema_version": 2})")).empty());
}

TEST(Json, UnknownKeyIsRejected) {
  try {
    scenario_from_json(R"({"schema_version": 1, "dvr": {"kq": 3}})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("dvr.kq"), std::string::npos);
  }
}

TEST(Json, WrongTypeIsRejected) {
  EXPECT_THROW(scenario_from_json(R"({"schema_version": 1, "solver": {"dt": "fast"}})"),
               ValidationError);
  EXPECT_THROW(scenario_from_json("not json"), ValidationError);
  EXPECT_THROW(scenario_from_json(R"({"schema_version": 1, "events": [{"kind": "spike"}]})"),
               ValidationError);
}

TEST(Json, OverridesApplyBeforeDecoding) {
  const Scenario s = scenario_from_json(
      R"({"schema_version": 1, "events": [{"kind": "sag", "t_start": 0.1, "t_end": 0.2, "depth": 0.3}]})",
      {{"dvr.kp", "4.5"}, {"events.0.depth", "0.4"}, {"name", "renamed"}, {"dvr.enabled", "false"}});
  EXPECT_EQ(s.dvr.kp, 4.5);
  EXPECT_EQ(s.events.at(0).depth, 0.4);
  EXPECT_EQ(s.name, "renamed");
  EXPECT_FALSE(s.dvr.enabled);
  EXPECT_THROW(scenario_from_json(R"({"schema_version": 1})", {{"events.3.depth", "1"}}),
               ValidationError);
  EXPECT_THROW(scenario_from_json(R"({"schema_version": 1})", {{"solver.dt", "\"x\""}}),
               ValidationError);
}

TEST(ParseOverride, SplitsAtFirstEquals) {
  const Override ov = parse_override(" dvr.kp = 2=3 ");
  EXPECT_EQ(ov.first, "dvr.kp");
  EXPECT_EQ(ov.second, "2=3");
  EXPECT_THROW(parse_override("dvr.kp"), ValidationError);
  EXPECT_THROW(parse_override("=1"), ValidationError);
}

TEST(Json, RoundTripPreservesEverything) {
  Scenario s;
  s.name = "round";
  s.dvr.kp = 3.25;
  s.pv.present = false;
  s.wind.machine.pole_pairs = 3;
  s.events.push_back({0.1, 0.3, events::EventKind::swell, 0.2, {true, false, true}});
  s.record = {"t", "rms_load_pu"};
  const std::string text = scenario_to_json(s);
  const Scenario back = scenario_from_json(text);
  EXPECT_EQ(scenario_to_json(back), text);
  EXPECT_EQ(back.events.at(0).phases[1], false);
  EXPECT_EQ(back.record, s.record);
}

TEST(ShippedScenarios, LoadAndValidate) {
  for (const char* name : {"case1_sag.json", "case2_swell.json"}) {
    const Scenario s = load_scenario(kScenarioDir / name);
    EXPECT_TRUE(validate(s).empty()) << name;
    EXPECT_EQ(s.events.size(), 2u);
    EXPECT_EQ(s.steps(), 20000u);
  }
  EXPECT_EQ(load_scenario(kScenarioDir / "case2_swell.json").events[1].kind,
            events::EventKind::swell);
}

}  // namespace
}  // namespace dvrsim
