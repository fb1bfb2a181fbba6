#include "smatruss/simulation.hpp"

#include <algorithm>
#include <future>
#include <numbers>
#include <sstream>

namespace smatruss {

BlowUpError::BlowUpError(double tau, double x)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "state left the blow-up guard at tau=" << tau << " (x=" << x << ")";
        return msg.str();
      }()),
      tau_(tau),
      x_(x) {}

void check_blowup(const SimState& s, double limit) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || std::abs(s.x) > limit) throw BlowUpError(s.tau, s.x);
}

std::string to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::none: return "none";
    case ControlMode::feedback_linearization: return "fl";
    case ControlMode::fuzzy_feedback_linearization: return "fuzzy-fl";
  }
  return "none";
}

ControlMode parse_control_mode(const std::string& name) {
  if (name == "none") return ControlMode::none;
  if (name == "fl") return ControlMode::feedback_linearization;
  if (name == "fuzzy-fl") return ControlMode::fuzzy_feedback_linearization;
  throw std::invalid_argument("unknown control mode '" + name + "' (expected none, fl or fuzzy-fl)");
}

long rate_ratio(const Scenario& sc) {
  const double ratio = sc.plant_rate / sc.control_rate;
  const double rounded = std::round(ratio);
  if (!(rounded >= 1.0) || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw std::invalid_argument("plant_rate must be an integer multiple of control_rate");
  }
  return static_cast<long>(rounded);
}

void validate(const Scenario& sc) {
  validate(sc.params);
  validate(sc.controller);
  if (!(sc.duration > 0.0) || !std::isfinite(sc.duration)) throw std::invalid_argument("duration must be positive");
  if (!(sc.plant_rate > 0.0) || !(sc.control_rate > 0.0)) throw std::invalid_argument("rates must be positive");
  if (!(sc.transient_fraction >= 0.0 && sc.transient_fraction < 1.0)) {
    throw std::invalid_argument("transient_fraction must lie in [0, 1)");
  }
  if (!(sc.blowup_limit > 0.0)) throw std::invalid_argument("blowup_limit must be positive");
  if (!std::isfinite(sc.x0) || !std::isfinite(sc.y0) || !std::isfinite(sc.setpoint)) {
    throw std::invalid_argument("initial state and setpoint must be finite");
  }
  rate_ratio(sc);
  if (std::llround(sc.duration * sc.plant_rate) < 1) {
    throw std::invalid_argument("duration is shorter than one plant step");
  }
}

void Series::reserve(std::size_t n) {
  for (auto* v : {&tau, &x, &y, &u, &d_hat, &s, &xtilde, &xtilde_dot, &d_tilde}) v->reserve(n);
}

std::size_t steady_state_begin(const Series& series, double fraction) {
  if (series.size() == 0) return 0;
  const double start = fraction * series.tau.back();
  const auto it = std::lower_bound(series.tau.begin(), series.tau.end(), start);
  return static_cast<std::size_t>(it - series.tau.begin());
}

std::vector<PoincarePoint> poincare_section(const Series& series, double omega) {
  std::vector<PoincarePoint> out;
  if (!(omega > 0.0) || series.size() < 2) return out;
  const double period = 2.0 * std::numbers::pi / omega;
  const double end = series.tau.back();
  for (long k = 1;; ++k) {
    const double t = static_cast<double>(k) * period;
    if (t > end) break;
    auto it = std::lower_bound(series.tau.begin(), series.tau.end(), t);
    auto hi = static_cast<std::size_t>(it - series.tau.begin());
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double w = (t - series.tau[lo]) / (series.tau[hi] - series.tau[lo]);
    out.push_back({t, series.x[lo] + w * (series.x[hi] - series.x[lo]),
                   series.y[lo] + w * (series.y[hi] - series.y[lo])});
  }
  return out;
}

std::size_t count_distinct(std::span<const PoincarePoint> points, double min_distance) {
  std::vector<PoincarePoint> kept;
  for (const auto& p : points) {
    const bool separate = std::all_of(kept.begin(), kept.end(), [&](const PoincarePoint& q) {
      return std::hypot(p.x - q.x, p.y - q.y) > min_distance;
    });
    if (separate) kept.push_back(p);
  }
  return kept.size();
}

long count_snap_throughs(const Series& series, std::size_t begin) {
  long count = 0;
  for (std::size_t i = begin + 1; i < series.size(); ++i) {
    if ((series.x[i - 1] < 0.0) != (series.x[i] < 0.0)) ++count;
  }
  return count;
}

BoundsReport verify_bounds(const Series& series, double lambda, double transient_fraction) {
  BoundsReport rep;
  const std::size_t begin = steady_state_begin(series, transient_fraction);
  rep.max_abs = {0.0, 0.0};
  for (std::size_t i = begin; i < series.size(); ++i) {
    rep.epsilon_hat = std::max(rep.epsilon_hat, std::abs(series.d_tilde[i]));
    rep.max_abs[0] = std::max(rep.max_abs[0], std::abs(series.xtilde[i]));
    rep.max_abs[1] = std::max(rep.max_abs[1], std::abs(series.xtilde_dot[i]));
  }
  rep.box = convergence_box(2, lambda, rep.epsilon_hat);
  rep.margin = {rep.box[0] - rep.max_abs[0], rep.box[1] - rep.max_abs[1]};
  rep.inside = begin < series.size() && rep.margin[0] >= 0.0 && rep.margin[1] >= 0.0;

  // Walk back from the end to the last exit from the box.
  std::size_t i = series.size();
  while (i > 0 && std::abs(series.xtilde[i - 1]) <= rep.box[0] &&
         std::abs(series.xtilde_dot[i - 1]) <= rep.box[1]) {
    --i;
  }
  if (i < series.size()) rep.entry_time = series.tau[i];
  return rep;
}

ScenarioResult run_scenario(const Scenario& sc) {
  validate(sc);
  const long ratio = rate_ratio(sc);
  const double h = 1.0 / sc.plant_rate;
  const double control_step = static_cast<double>(ratio) * h;
  const long steps = std::llround(sc.duration * sc.plant_rate);

  ControllerConfig cfg = sc.controller;
  cfg.fuzzy_enabled = sc.mode == ControlMode::fuzzy_feedback_linearization;
  FuzzyState fz = FuzzyState::from(cfg.fuzzy);
  const auto gains = gain_vector(cfg.order, cfg.lambda);
  const Reference ref{sc.setpoint, 0.0, 0.0};

  ScenarioResult result;
  Series& out = result.series;
  out.reserve(static_cast<std::size_t>(steps) + 1);

  SimState state{sc.x0, sc.y0, 0.0};
  check_blowup(state, sc.blowup_limit);
  double u = 0.0;
  double d_hat = 0.0;
  for (long i = 0;; ++i) {
    if (sc.mode != ControlMode::none && i < steps && i % ratio == 0) {
      const ControlOutput c = control_fuzzy_fl(state, ref, cfg, fz, control_step);
      u = c.u;
      d_hat = c.d_hat;
    }
    const double e[2] = {state.x - ref.x, state.y - ref.dx};
    // Everything the plant does that the controller's model does not predict.
    const double d = derivative(state, sc.params, 0.0, true).dy - model_acceleration(state, cfg.estimates);
    out.tau.push_back(state.tau);
    out.x.push_back(state.x);
    out.y.push_back(state.y);
    out.u.push_back(u);
    out.d_hat.push_back(d_hat);
    out.s.push_back(combined_error(e, gains));
    out.xtilde.push_back(e[0]);
    out.xtilde_dot.push_back(e[1]);
    out.d_tilde.push_back(d_hat - d);
    if (i == steps) break;

    const double held = u;
    state = rk4_step(
        state, h, [&](const SimState& s) { return derivative(s, sc.params, held, true); }, sc.blowup_limit);
    state.tau = static_cast<double>(i + 1) * h;
  }

  const std::size_t begin = steady_state_begin(out, sc.transient_fraction);
  Metrics& m = result.metrics;
  double sum_sq = 0.0;
  for (std::size_t i = begin; i < out.size(); ++i) {
    sum_sq += out.xtilde[i] * out.xtilde[i];
    m.max_abs_error = std::max(m.max_abs_error, std::abs(out.xtilde[i]));
  }
  m.rms_error = std::sqrt(sum_sq / static_cast<double>(out.size() - begin));
  m.snap_through_count = count_snap_throughs(out, begin);
  result.poincare = poincare_section(out, sc.params.omega);
  m.poincare_points = result.poincare.size();
  m.distinct_poincare_points = count_distinct(result.poincare);
  m.bounds = verify_bounds(out, cfg.lambda, sc.transient_fraction);
  return result;
}

std::vector<ScenarioOutcome> run_scenarios(std::span<const Scenario> scenarios) {
  std::vector<std::future<ScenarioResult>> jobs;
  jobs.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    jobs.push_back(std::async(std::launch::async, [&sc] { return run_scenario(sc); }));
  }
  std::vector<ScenarioOutcome> out(scenarios.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      out[i].result = jobs[i].get();
    } catch (const BlowUpError& e) {
      out[i].error = e.what();
      out[i].blew_up = true;
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

}  // namespace smatruss
