#include <benchmark/benchmark.h>

#include "dvrsim/signals.hpp"

namespace {

using dvrsim::ThreePhaseSample;
namespace signals = dvrsim::signals;

void BM_ParkRoundTrip(benchmark::State& state) {
  double theta = 0.0;
  for (auto _ : state) {
    const ThreePhaseSample x = signals::balanced(325.0, theta);
    benchmark::DoNotOptimize(signals::dq_to_abc(signals::abc_to_dq(x, theta + 0.1)));
    theta += 0.0157;
  }
}
BENCHMARK(BM_ParkRoundTrip);

void BM_SlidingRms(benchmark::State& state) {
  signals::SlidingRms rms(400);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rms.push(x));
    x += 0.001;
  }
}
BENCHMARK(BM_SlidingRms);

void BM_SequenceExtractor(benchmark::State& state) {
  signals::SequenceExtractor ex(400);
  double theta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ex.push(signals::balanced(325.0, theta), theta));
    theta += 0.0157;
  }
}
BENCHMARK(BM_SequenceExtractor);

}  // namespace
