#include <benchmark/benchmark.h>

#include <filesystem>

#include "dvrsim/engine.hpp"

namespace {

const std::filesystem::path kDir = DVRSIM_BENCH_SCENARIO_DIR;

void BM_RunCase1(benchmark::State& state) {
  const dvrsim::Scenario s = dvrsim::load_scenario(kDir / "case1_sag.json");
  for (auto _ : state) benchmark::DoNotOptimize(dvrsim::run(s));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.steps()));
}
BENCHMARK(BM_RunCase1)->Unit(benchmark::kMillisecond);

void BM_RunCase1WithoutDers(benchmark::State& state) {
  const dvrsim::Scenario s = dvrsim::load_scenario(
      kDir / "case1_sag.json", {{"wind.present", "false"}, {"pv.present", "false"}});
  for (auto _ : state) benchmark::DoNotOptimize(dvrsim::run(s));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.steps()));
}
BENCHMARK(BM_RunCase1WithoutDers)->Unit(benchmark::kMillisecond);

void BM_SimulationStep(benchmark::State& state) {
  dvrsim::Scenario s = dvrsim::load_scenario(kDir / "case1_sag.json");
  s.solver.t_end = 1e3;  // never reaches the end inside the loop
  dvrsim::Simulation sim(s);
  for (auto _ : state) sim.step();
}
BENCHMARK(BM_SimulationStep)->Iterations(200000);

}  // namespace
