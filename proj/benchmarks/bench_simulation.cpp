#include <benchmark/benchmark.h>

#include "smatruss/controller.hpp"
#include "smatruss/dynamics.hpp"
#include "smatruss/fuzzy.hpp"
#include "smatruss/simulation.hpp"

namespace {

using namespace smatruss;

void BM_RestoringTerm(benchmark::State& state) {
  const TrussParams p = TrussParams::chaotic_reference();
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(restoring_term(x, p));
    x = x > 0.9 ? -0.9 : x + 1e-3;
  }
}
BENCHMARK(BM_RestoringTerm);

void BM_FuzzyInfer(benchmark::State& state) {
  const auto part = fuzzy::MembershipPartition::reference();
  fuzzy::RuleConsequents cons;
  cons.values = {0.3, 0.1, 0.0, 0.0, -0.1, -0.3};
  double s = -0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuzzy::infer(s, part, cons));
    s = s > 0.2 ? -0.2 : s + 1e-4;
  }
}
BENCHMARK(BM_FuzzyInfer);

void BM_ControlFuzzyFl(benchmark::State& state) {
  ControllerConfig cfg;
  cfg.fuzzy_enabled = true;
  FuzzyState fz = FuzzyState::from(cfg.fuzzy);
  const Reference ref{0.68, 0.0, 0.0};
  SimState s{0.69, 0.01, 0.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(control_fuzzy_fl(s, ref, cfg, fz, 1e-3));
  }
}
BENCHMARK(BM_ControlFuzzyFl);

void BM_Rk4Step(benchmark::State& state) {
  const TrussParams p = TrussParams::chaotic_reference();
  SimState s{0.68, 0.0, 0.0};
  const double h = 3.14159265358979 / 500.0;
  for (auto _ : state) {
    s = rk4_step(s, h, [&](const SimState& st) { return derivative(st, p, 0.0); });
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_Rk4Step);

void BM_Scenario(benchmark::State& state) {
  Scenario sc;
  sc.mode = static_cast<ControlMode>(state.range(0));
  sc.duration = 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_scenario(sc));
  }
  state.SetLabel(to_string(sc.mode));
}
BENCHMARK(BM_Scenario)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
