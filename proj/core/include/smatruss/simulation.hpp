#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "smatruss/controller.hpp"
#include "smatruss/dynamics.hpp"

namespace smatruss {

/// Raised when |x| leaves the blow-up guard or the state stops being finite.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double tau, double x);
  double tau() const { return tau_; }
  double x() const { return x_; }

 private:
  double tau_;
  double x_;
};

/// Throws BlowUpError if the state is non-finite or |x| > limit.
void check_blowup(const SimState& state, double limit);

/// Classical fourth-order Runge-Kutta step. `field` maps a SimState to its
/// StateDerivative with any control input already frozen (zero-order hold).
template <typename Field>
SimState rk4_step(const SimState& s, double dt, Field&& field,
                  double blowup_limit = std::numeric_limits<double>::infinity()) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  const double h2 = 0.5 * dt;
  const StateDerivative k1 = field(s);
  const StateDerivative k2 = field(SimState{s.x + h2 * k1.dx, s.y + h2 * k1.dy, s.tau + h2});
  const StateDerivative k3 = field(SimState{s.x + h2 * k2.dx, s.y + h2 * k2.dy, s.tau + h2});
  const StateDerivative k4 = field(SimState{s.x + dt * k3.dx, s.y + dt * k3.dy, s.tau + dt});
  SimState next{s.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
                s.y + dt / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy), s.tau + dt};
  check_blowup(next, blowup_limit);
  return next;
}

enum class ControlMode { none, feedback_linearization, fuzzy_feedback_linearization };

std::string to_string(ControlMode mode);
/// Accepts "none", "fl" and "fuzzy-fl". Throws std::invalid_argument.
ControlMode parse_control_mode(const std::string& name);

struct Scenario {
  TrussParams params = TrussParams::chaotic_reference();
  ControlMode mode = ControlMode::fuzzy_feedback_linearization;
  /// Gains and model used by the controller; fuzzy_enabled follows `mode`.
  /// Also defines s and d_tilde in the recorded series of uncontrolled runs.
  ControllerConfig controller;
  double x0 = 0.68;
  double y0 = 0.0;
  double setpoint = 0.68;
  double duration = 1000.0;
  double plant_rate = 1000.0 * 0.5 / std::numbers::pi;   ///< samples per unit tau
  double control_rate = 200.0 * 0.5 / std::numbers::pi;  ///< samples per unit tau
  double transient_fraction = 0.5;
  double blowup_limit = 10.0;

  bool operator==(const Scenario&) const = default;
};

/// Throws std::invalid_argument on any violated scenario invariant, including
/// a plant/control rate ratio that is not an integer.
void validate(const Scenario& sc);

/// Number of plant steps per control update.
long rate_ratio(const Scenario& sc);

/// One row per plant step, tau = 0 included. u and d_hat are the values held
/// over the step that starts at that row.
struct Series {
  std::vector<double> tau, x, y, u, d_hat, s, xtilde, xtilde_dot, d_tilde;

  std::size_t size() const { return tau.size(); }
  void reserve(std::size_t n);
  bool operator==(const Series&) const = default;
};

struct PoincarePoint {
  double tau = 0.0;
  double x = 0.0;
  double y = 0.0;
  bool operator==(const PoincarePoint&) const = default;
};

/// Convergence-box check for a second-order loop over the steady-state window.
struct BoundsReport {
  double epsilon_hat = 0.0;              ///< max |d_tilde| in the window
  std::vector<double> box;               ///< half-widths for xtilde, xtilde'
  std::vector<double> max_abs;           ///< observed max |xtilde^(i)|
  std::vector<double> margin;            ///< box - max_abs
  bool inside = false;
  std::optional<double> entry_time;      ///< tau after which the error never leaves the box
};

struct Metrics {
  double rms_error = 0.0;
  double max_abs_error = 0.0;
  long snap_through_count = 0;
  std::size_t poincare_points = 0;
  std::size_t distinct_poincare_points = 0;
  BoundsReport bounds;
};

struct ScenarioResult {
  Series series;
  std::vector<PoincarePoint> poincare;
  Metrics metrics;
  bool operator==(const ScenarioResult& o) const { return series == o.series && poincare == o.poincare; }
};

/// First row index of the steady-state window tau >= fraction * tau_end.
std::size_t steady_state_begin(const Series& series, double fraction);

/// Samples the state at tau_k = 2 pi k / omega, k >= 1, by linear
/// interpolation between the bracketing rows. Empty when omega <= 0 or the
/// run is shorter than one period.
std::vector<PoincarePoint> poincare_section(const Series& series, double omega);

/// Points that are more than `min_distance` away from every earlier kept point.
std::size_t count_distinct(std::span<const PoincarePoint> points, double min_distance = 1e-3);

/// Sign changes of x between consecutive rows from `begin` on.
long count_snap_throughs(const Series& series, std::size_t begin);

/// Estimates epsilon as max steady-state |d_tilde| and checks that the
/// steady-state (xtilde, xtilde') lie in convergence_box(2, lambda, epsilon).
BoundsReport verify_bounds(const Series& series, double lambda, double transient_fraction);

/// Integrates the closed loop: plant steps of 1/plant_rate, control updates
/// every rate_ratio steps with the input held in between. Forcing always acts
/// on the plant and is never visible to the controller. Propagates BlowUpError.
ScenarioResult run_scenario(const Scenario& sc);

struct ScenarioOutcome {
  std::optional<ScenarioResult> result;
  std::string error;
  bool blew_up = false;
};

/// Runs independent scenarios concurrently; one failure does not stop the others.
std::vector<ScenarioOutcome> run_scenarios(std::span<const Scenario> scenarios);

}  // namespace smatruss
