#include <benchmark/benchmark.h>

#include <lvdelay/fixtures.hpp>
#include <lvdelay/lyapunov.hpp>
#include <lvdelay/report.hpp>

namespace {

using namespace lvd;

void BM_Analyze(benchmark::State& state) {
  const LoadedSpec loaded = fixture_spec("ex5_2_a1");
  for (auto _ : state) {
    AnalysisResult r = analyze(loaded.spec);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Analyze);

void BM_IntegrateDirac(benchmark::State& state) {
  const LoadedSpec loaded = fixture_spec("ex5_1_uncontrolled");
  for (auto _ : state) {
    Trajectory traj = integrate(loaded.spec, *loaded.history, 50.0, 0.01);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_IntegrateDirac);

void BM_IntegrateGamma(benchmark::State& state) {
  const LoadedSpec loaded = fixture_spec("ex5_3_controlled");
  for (auto _ : state) {
    Trajectory traj = integrate(loaded.spec, *loaded.history, 50.0, 0.01);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_IntegrateGamma);

void BM_LyapunovTrace(benchmark::State& state) {
  const LoadedSpec loaded = fixture_spec("ex2_1");
  const AnalysisResult r = analyze(loaded.spec);
  const Trajectory traj = integrate(loaded.spec, *loaded.history, 50.0, 0.01);
  for (auto _ : state) {
    LyapunovTrace lt =
        lyapunov_trace(traj, *r.verdict.equilibrium, *r.verdict.eta_q_cert, 10);
    benchmark::DoNotOptimize(lt);
  }
}
BENCHMARK(BM_LyapunovTrace);

}  // namespace

BENCHMARK_MAIN();
