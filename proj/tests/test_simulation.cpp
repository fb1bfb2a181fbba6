#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smatruss/simulation.hpp"

namespace smatruss {
namespace {

Scenario perfect_model_scenario() {
  Scenario sc;
  sc.params.gamma = 0.0;
  sc.mode = ControlMode::feedback_linearization;
  sc.controller.estimates = ModelEstimates::from(sc.params);
  return sc;
}

Scenario reference_scenario(ControlMode mode) {
  Scenario sc;
  sc.mode = mode;
  sc.controller.estimates = ModelEstimates::from(sc.params);
  sc.controller.estimates.alpha2 = 1e2;
  sc.controller.estimates.alpha3 = 1.15e4;
  return sc;
}

TEST(Rk4Step, ExponentialOneStep) {
  const auto grow = [](const SimState& s) { return StateDerivative{s.x, 0.0}; };
  const SimState next = rk4_step(SimState{1.0, 0.0, 0.0}, 0.1, grow);
  // 1 + h + h^2/2 + h^3/6 + h^4/24
  EXPECT_NEAR(next.x, 1.1051708333333333, 1e-15);
  EXPECT_DOUBLE_EQ(next.tau, 0.1);
}

TEST(Rk4Step, ZeroFieldOnlyAdvancesTime) {
  const auto still = [](const SimState&) { return StateDerivative{}; };
  const SimState s{0.3, -0.2, 4.0};
  const SimState next = rk4_step(s, 0.25, still);
  EXPECT_EQ(next.x, s.x);
  EXPECT_EQ(next.y, s.y);
  EXPECT_EQ(next.tau, 4.25);
}

TEST(Rk4Step, GuardAndStepValidation) {
  const auto push = [](const SimState&) { return StateDerivative{100.0, 0.0}; };
  EXPECT_THROW(rk4_step(SimState{}, 0.2, push, 10.0), BlowUpError);
  EXPECT_NO_THROW(rk4_step(SimState{}, 0.05, push, 10.0));
  EXPECT_THROW(rk4_step(SimState{}, 0.0, push), std::invalid_argument);
  try {
    rk4_step(SimState{9.0, 0.0, 1.0}, 0.1, push, 10.0);
    FAIL();
  } catch (const BlowUpError& e) {
    EXPECT_NEAR(e.x(), 19.0, 1e-12);
    EXPECT_NEAR(e.tau(), 1.1, 1e-12);
  }
}

// Max deviation over [0, T] of an RK4 solution at step h from a reference at
// step h_ref, compared at the coarse grid.
std::vector<SimState> integrate(const TrussParams& p, SimState s, double h, int steps) {
  std::vector<SimState> out{s};
  for (int i = 0; i < steps; ++i) {
    s = rk4_step(s, h, [&](const SimState& st) { return derivative(st, p, 0.0, false); });
    out.push_back(s);
  }
  return out;
}

TEST(Rk4Step, FourthOrderSelfConvergence) {
  const TrussParams p = TrussParams::chaotic_reference();
  const SimState s0{0.6, 0.2, 0.0};
  const double h = 0.01;
  const int steps = 1000;  // tau in [0, 10]
  const auto coarse = integrate(p, s0, h, steps);
  const auto fine = integrate(p, s0, h / 2, 2 * steps);
  const auto ref = integrate(p, s0, h / 64, 64 * steps);
  double e_coarse = 0.0, e_fine = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const auto& r = ref[static_cast<std::size_t>(64 * i)];
    e_coarse = std::max(e_coarse, std::abs(coarse[static_cast<std::size_t>(i)].x - r.x));
    e_fine = std::max(e_fine, std::abs(fine[static_cast<std::size_t>(2 * i)].x - r.x));
  }
  EXPECT_GT(e_coarse / e_fine, 12.0);
  EXPECT_LT(e_coarse / e_fine, 20.0);
}

TEST(Scenario, Validation) {
  Scenario sc;
  EXPECT_NO_THROW(validate(sc));
  EXPECT_EQ(rate_ratio(sc), 5);
  sc.control_rate = sc.plant_rate / 2.5;
  EXPECT_THROW(validate(sc), std::invalid_argument);
  sc = {};
  sc.duration = 0.0;
  EXPECT_THROW(validate(sc), std::invalid_argument);
  sc = {};
  sc.transient_fraction = 1.0;
  EXPECT_THROW(validate(sc), std::invalid_argument);
  sc = {};
  sc.params.b = 1.2;
  EXPECT_THROW(validate(sc), std::invalid_argument);
  EXPECT_THROW(run_scenario(sc), std::invalid_argument);
}

TEST(ControlModeNames, RoundTrip) {
  for (auto m : {ControlMode::none, ControlMode::feedback_linearization, ControlMode::fuzzy_feedback_linearization}) {
    EXPECT_EQ(parse_control_mode(to_string(m)), m);
  }
  EXPECT_THROW(parse_control_mode("pid"), std::invalid_argument);
}

TEST(RunScenario, SeriesLayout) {
  Scenario sc = reference_scenario(ControlMode::fuzzy_feedback_linearization);
  sc.duration = 20.0;
  const auto r = run_scenario(sc);
  const auto n = static_cast<std::size_t>(std::llround(sc.duration * sc.plant_rate)) + 1;
  ASSERT_EQ(r.series.size(), n);
  for (const auto* v : {&r.series.x, &r.series.y, &r.series.u, &r.series.d_hat, &r.series.s, &r.series.xtilde,
                        &r.series.xtilde_dot, &r.series.d_tilde}) {
    EXPECT_EQ(v->size(), n);
  }
  EXPECT_EQ(r.series.tau.front(), 0.0);
  EXPECT_NEAR(r.series.tau[1], 1.0 / sc.plant_rate, 1e-15);
  // Control is held for five plant steps.
  EXPECT_EQ(r.series.u[1], r.series.u[0]);
  EXPECT_EQ(r.series.u[4], r.series.u[0]);
}

TEST(RunScenario, Deterministic) {
  Scenario sc = reference_scenario(ControlMode::fuzzy_feedback_linearization);
  sc.duration = 100.0;
  const auto a = run_scenario(sc);
  const auto b = run_scenario(sc);
  EXPECT_TRUE(a.series == b.series);
  EXPECT_EQ(a.metrics.rms_error, b.metrics.rms_error);
}

TEST(RunScenario, PerfectModelErrorDecays) {
  Scenario sc = perfect_model_scenario();
  sc.x0 = 0.75;
  sc.duration = 100.0;
  sc.transient_fraction = 0.75;
  const auto r = run_scenario(sc);
  EXPECT_LT(r.metrics.rms_error, 1e-6);
  EXPECT_LT(r.metrics.bounds.epsilon_hat, 1e-9);
}

TEST(RunScenario, UncontrolledHoldsZeroInput) {
  Scenario sc = reference_scenario(ControlMode::none);
  sc.duration = 50.0;
  const auto r = run_scenario(sc);
  EXPECT_TRUE(std::all_of(r.series.u.begin(), r.series.u.end(), [](double u) { return u == 0.0; }));
  EXPECT_TRUE(std::all_of(r.series.d_hat.begin(), r.series.d_hat.end(), [](double d) { return d == 0.0; }));
}

TEST(RunScenario, ClosedLoopReconstructionAtControlInstants) {
  // x~'' + k1 x~' + k0 x~ = d - d_hat = -d_tilde whenever u was just formed.
  Scenario sc = reference_scenario(ControlMode::fuzzy_feedback_linearization);
  sc.duration = 200.0;
  const auto r = run_scenario(sc);
  const auto ratio = static_cast<std::size_t>(rate_ratio(sc));
  const auto& s = r.series;
  for (std::size_t i = 0; i + 1 < s.size(); i += ratio) {
    const double accel = derivative({s.x[i], s.y[i], s.tau[i]}, sc.params, s.u[i], true).dy;
    const double lhs = accel + 1.2 * s.xtilde_dot[i] + 0.36 * s.xtilde[i];
    EXPECT_NEAR(lhs + s.d_tilde[i], 0.0, 1e-11) << "tau=" << s.tau[i];
  }
}

TEST(RunScenario, ZeroOrderHoldEffectOnSteadyState) {
  for (auto mode : {ControlMode::feedback_linearization, ControlMode::fuzzy_feedback_linearization}) {
    Scenario held = reference_scenario(mode);
    Scenario every_step = held;
    every_step.control_rate = every_step.plant_rate;
    const auto a = run_scenario(held);
    const auto b = run_scenario(every_step);
    EXPECT_LT(std::abs(a.metrics.rms_error - b.metrics.rms_error) / b.metrics.rms_error, 0.05)
        << to_string(mode) << " " << a.metrics.rms_error << " vs " << b.metrics.rms_error;
  }
}

TEST(RunScenario, ContinuousControlLimitWithRate) {
  // With control every plant step the only gap to the ideal e(t) =
  // 0.1 (1 + 0.6 t) e^{-0.6 t} is the held input; it shrinks with the step.
  double previous = 1.0;
  for (double rate : {250.0, 1000.0, 4000.0}) {
    Scenario sc = perfect_model_scenario();
    sc.x0 = 0.78;
    sc.setpoint = 0.68;
    sc.duration = 10.0;
    sc.plant_rate = sc.control_rate = rate;
    const auto r = run_scenario(sc);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.series.size(); ++i) {
      const double t = r.series.tau[i];
      worst = std::max(worst, std::abs(r.series.xtilde[i] - 0.1 * (1 + 0.6 * t) * std::exp(-0.6 * t)));
    }
    EXPECT_LT(worst, previous);
    previous = worst;
  }
  EXPECT_LT(previous, 1e-4);
}

TEST(RunScenario, BlowUpPropagates) {
  Scenario sc = reference_scenario(ControlMode::none);
  // The sextic potential keeps even hard-driven orbits bounded, so tighten the guard.
  sc.params.gamma = 5.0;
  sc.blowup_limit = 1.0;
  sc.duration = 50.0;
  EXPECT_THROW(run_scenario(sc), BlowUpError);
}

TEST(RunScenarios, ConcurrentMatchesSequential) {
  std::vector<Scenario> batch;
  for (auto mode : {ControlMode::none, ControlMode::feedback_linearization, ControlMode::fuzzy_feedback_linearization}) {
    batch.push_back(reference_scenario(mode));
    batch.back().duration = 60.0;
  }
  Scenario broken = reference_scenario(ControlMode::none);
  broken.params.gamma = 5.0;
  broken.blowup_limit = 1.0;
  broken.duration = 50.0;
  batch.push_back(broken);

  const auto outcomes = run_scenarios(batch);
  ASSERT_EQ(outcomes.size(), batch.size());
  for (std::size_t i = 0; i + 1 < batch.size(); ++i) {
    ASSERT_TRUE(outcomes[i].result.has_value());
    EXPECT_TRUE(outcomes[i].result->series == run_scenario(batch[i]).series);
  }
  EXPECT_FALSE(outcomes.back().result.has_value());
  EXPECT_TRUE(outcomes.back().blew_up);
}

TEST(FuzzyCompensation, LearnsConstantDisturbance) {
  // Exact model plus an unmodelled constant push d: the adapted table must
  // settle on d near s = 0 and the tracking error must vanish.
  const TrussParams p = [] {
    TrussParams q = TrussParams::chaotic_reference();
    q.gamma = 0.0;
    return q;
  }();
  const double d = 0.05;
  ControllerConfig cfg;
  cfg.estimates = ModelEstimates::from(p);
  cfg.fuzzy_enabled = true;
  FuzzyState fz = FuzzyState::from(cfg.fuzzy);
  const Reference ref{0.68, 0.0, 0.0};
  const double h = 0.01;
  SimState s{0.70, 0.0, 0.0};
  ControlOutput out;
  for (int i = 0; i < 40000; ++i) {
    out = control_fuzzy_fl(s, ref, cfg, fz, h);
    s = rk4_step(s, h, [&](const SimState& st) { return derivative(st, p, out.u + d, false); });
  }
  EXPECT_NEAR(out.d_hat, d, 1e-3);
  EXPECT_LT(std::abs(s.x - 0.68), 1e-3);
}

TEST(Poincare, EmptyBeforeOnePeriod) {
  Scenario sc = reference_scenario(ControlMode::none);
  sc.duration = 0.5 * 2 * std::numbers::pi / sc.params.omega;
  const auto r = run_scenario(sc);
  EXPECT_TRUE(r.poincare.empty());
  EXPECT_TRUE(poincare_section(r.series, 0.0).empty());
}

TEST(Poincare, SamplesOncePerPeriodByInterpolation) {
  Series s;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.1 * i;
    s.tau.push_back(t);
    s.x.push_back(2.0 * t);
    s.y.push_back(-t);
  }
  const double omega = 2.0 * std::numbers::pi / 2.55;  // period 2.55, off the grid
  const auto pts = poincare_section(s, omega);
  ASSERT_EQ(pts.size(), 3u);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double t = 2.55 * static_cast<double>(k + 1);
    EXPECT_NEAR(pts[k].tau, t, 1e-12);
    EXPECT_NEAR(pts[k].x, 2.0 * t, 1e-12);
    EXPECT_NEAR(pts[k].y, -t, 1e-12);
  }
}

TEST(Poincare, PeriodOneResponseCollapsesToAPoint) {
  Scenario sc = reference_scenario(ControlMode::none);
  sc.params.gamma = 0.002;
  sc.params.xi = 0.2;
  sc.x0 = 0.6828;
  sc.duration = 60 * 2 * std::numbers::pi / sc.params.omega;
  const auto r = run_scenario(sc);
  ASSERT_EQ(r.poincare.size(), 60u);
  double diameter = 0.0;
  for (std::size_t i = 30; i < r.poincare.size(); ++i) {
    for (std::size_t j = 30; j < r.poincare.size(); ++j) {
      diameter = std::max(diameter, std::hypot(r.poincare[i].x - r.poincare[j].x, r.poincare[i].y - r.poincare[j].y));
    }
  }
  EXPECT_LT(diameter, 1e-3);
  EXPECT_EQ(r.metrics.snap_through_count, 0);
}

TEST(Metrics, CountingHelpers) {
  Series s;
  s.tau = {0, 1, 2, 3, 4, 5, 6};
  s.x = {0.5, -0.1, -0.2, 0.0, 0.3, -0.3, -0.4};
  EXPECT_EQ(count_snap_throughs(s, 0), 3);
  EXPECT_EQ(count_snap_throughs(s, 3), 1);
  EXPECT_EQ(steady_state_begin(s, 0.5), 3u);
  EXPECT_EQ(steady_state_begin(s, 0.0), 0u);

  const std::vector<PoincarePoint> pts{{0, 0.0, 0.0}, {1, 0.0005, 0.0}, {2, 0.01, 0.0}, {3, 0.0, 0.0}};
  EXPECT_EQ(count_distinct(pts), 2u);
  EXPECT_EQ(count_distinct(pts, 1e-4), 3u);
}

TEST(Metrics, VerifyBoundsOnSyntheticSeries) {
  Series s;
  for (int i = 0; i <= 10; ++i) {
    s.tau.push_back(i);
    s.xtilde.push_back(i < 5 ? 1.0 : 0.01);
    s.xtilde_dot.push_back(i < 5 ? 1.0 : -0.01);
    s.d_tilde.push_back(i < 5 ? 5.0 : 0.0036);
  }
  const auto rep = verify_bounds(s, 0.6, 0.5);
  EXPECT_DOUBLE_EQ(rep.epsilon_hat, 0.0036);
  EXPECT_NEAR(rep.box[0], 0.01, 1e-15);
  EXPECT_NEAR(rep.box[1], 0.012, 1e-15);
  EXPECT_TRUE(rep.inside);
  ASSERT_TRUE(rep.entry_time.has_value());
  EXPECT_EQ(*rep.entry_time, 5.0);
  EXPECT_NEAR(rep.margin[1], 0.002, 1e-15);

  s.xtilde.back() = 0.02;
  const auto out = verify_bounds(s, 0.6, 0.5);
  EXPECT_FALSE(out.inside);
  EXPECT_FALSE(out.entry_time.has_value());
}

}  // namespace
}  // namespace smatruss
