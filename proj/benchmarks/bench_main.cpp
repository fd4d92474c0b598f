#include <benchmark/benchmark.h>

#include "dualrail/protocols.hpp"
#include "dualrail/studies.hpp"
#include "dualrail/tuneup.hpp"

using namespace dualrail;

namespace {

const double kChi = -kTwoPi * 1.066;

DriveSchedule check() { return table_two_check(kChi, AncillaPair::GE, kTwoPi * 1.04, 1.699); }

void BM_SchrodingerCheck(benchmark::State& st) {
  const int d = int(st.range(0));
  const ModeLayout l{d, d, 2};
  const DriveSchedule s = check();
  for (auto _ : st) benchmark::DoNotOptimize(propagate(s, basis_state(l, 0, 1)));
}
BENCHMARK(BM_SchrodingerCheck)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LindbladCheck(benchmark::State& st) {
  const int d = int(st.range(0));
  const ModeLayout l{d, d, 2};
  const DriveSchedule s = check();
  const CollapseSet c = collapse_operators(NoiseParams::device(), build_mode_operators(l));
  const MixedState r = MixedState::from_pure(basis_state(l, 0, 1));
  for (auto _ : st) benchmark::DoNotOptimize(propagate(s, r, c));
}
BENCHMARK(BM_LindbladCheck)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ScheduleChannel(benchmark::State& st) {
  const ModeLayout l = dual_rail_layout(AncillaPair::GE);
  const DriveSchedule s = check();
  const CollapseSet c = collapse_operators(NoiseParams::device(), build_mode_operators(l));
  for (auto _ : st) benchmark::DoNotOptimize(schedule_channel(s, l, c));
}
BENCHMARK(BM_ScheduleChannel)->Unit(benchmark::kMillisecond);

void BM_ProbeResponse(benchmark::State& st) {
  SpectroscopyConfig c;
  c.N = int(st.range(0));
  c.chi = kChi;
  c.delta = 0.5 * kChi;
  c.probe = default_probe(kChi);
  double w = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(probe_response(c, 1.2 * std::abs(kChi), w));
    w += 1e-3;
  }
}
BENCHMARK(BM_ProbeResponse)->Arg(1)->Arg(2)->Arg(3);

void BM_SpinOracle(benchmark::State& st) {
  const int N = int(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(transition_matrix_elements({N, 1.3 * std::abs(kChi), 0.4 * kChi, kChi, 0.2}));
}
BENCHMARK(BM_SpinOracle)->Arg(1)->Arg(4)->Arg(8);

void BM_ChannelSampler(benchmark::State& st) {
  CounterRng rng(1, 0);
  for (auto _ : st) benchmark::DoNotOptimize(sample_gate_error_channel(0.01, 0.98, 0.034, GateKind::CX, rng));
}
BENCHMARK(BM_ChannelSampler);

void BM_ChevronFit(benchmark::State& st) {
  const double g = std::abs(kChi);
  const auto data = simulate_chevron(g, 0.2, linspace(0.0, 3 * kTwoPi / g, 60), linspace(0.2 - 2 * g, 0.2 + 2 * g, 21));
  for (auto _ : st) benchmark::DoNotOptimize(fit_chevron(data));
}
BENCHMARK(BM_ChevronFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
