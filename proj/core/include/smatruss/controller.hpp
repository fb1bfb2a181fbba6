#pragma once

#include <span>
#include <vector>

#include "smatruss/dynamics.hpp"
#include "smatruss/fuzzy.hpp"

// Feedback linearization for x^(n) = f(x) + u + d, with and without the fuzzy
// disturbance compensator, plus the bound box that the compensated loop is
// guaranteed to reach.

namespace smatruss {

/// Model coefficients the controller believes in when it forms f_hat.
struct ModelEstimates {
  double theta = 1.0;
  double xi = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double b = 0.0;

  bool operator==(const ModelEstimates&) const = default;

  /// Exact copy of the plant coefficients (perfect model).
  static ModelEstimates from(const TrussParams& params);
  /// Reference plant with alpha2 and alpha3 underestimated (100, 1.15e4).
  static ModelEstimates reference();
};

struct FuzzySettings {
  std::vector<double> centers{-1.00e-1, -0.50e-1, -0.02e-1, 0.02e-1, 0.50e-1, 1.0e-1};
  double phi = 2.0;     ///< adaptation rate, 0 keeps the table fixed
  double d_max = 10.0;  ///< consequent clamp

  bool operator==(const FuzzySettings&) const = default;
};

struct ControllerConfig {
  int order = 2;
  double lambda = 0.6;
  ModelEstimates estimates = ModelEstimates::reference();
  bool fuzzy_enabled = false;
  FuzzySettings fuzzy;

  bool operator==(const ControllerConfig&) const = default;
};

void validate(const ControllerConfig& cfg);

/// Desired position, velocity and acceleration at one instant.
struct Reference {
  double x = 0.0;
  double dx = 0.0;
  double ddx = 0.0;
};

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k);

/// k_i = C(n, i) lambda^(n-i), i = 0..n-1, so that p^n + k_{n-1} p^{n-1} + ...
/// + k_0 = (p + lambda)^n.
std::vector<double> gain_vector(int n, double lambda);

/// s = sum_i k_i xtilde^(i).
double combined_error(std::span<const double> xtilde, std::span<const double> gains);

/// f_hat = -xi_hat y + R(x; estimates). Forcing is not part of the model.
double model_acceleration(const SimState& state, const ModelEstimates& est);

/// Conventional feedback linearization, unit input gain.
double control_fl(const SimState& state, const Reference& ref, const ControllerConfig& cfg);

/// Mutable part of the fuzzy-compensated controller.
struct FuzzyState {
  fuzzy::MembershipPartition partition = fuzzy::MembershipPartition::reference();
  fuzzy::RuleConsequents consequents = fuzzy::RuleConsequents::zeros(6);

  static FuzzyState from(const FuzzySettings& settings);
};

struct ControlOutput {
  double u = 0.0;
  double d_hat = 0.0;
  double s = 0.0;
};

/// u = control_fl - d_hat(s). When cfg.fuzzy_enabled is false d_hat is zero
/// and nothing adapts. Otherwise the consequents take one adaptation step of
/// length `dtau` after u has been formed.
ControlOutput control_fuzzy_fl(const SimState& state, const Reference& ref, const ControllerConfig& cfg,
                               FuzzyState& fuzzy, double dtau);

/// zeta_0 = 1, zeta_i = 1 + sum_{j<i} C(i, j) zeta_j.
std::vector<double> zeta_coefficients(int n);

/// Half-widths zeta_i lambda^(i-n) epsilon of the box that the tracking error
/// vector enters exponentially when |d_hat - d| <= epsilon.
std::vector<double> convergence_box(int n, double lambda, double epsilon);

}  // namespace smatruss
