#include "smatruss/controller.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace smatruss {

ModelEstimates ModelEstimates::from(const TrussParams& p) {
  return ModelEstimates{p.theta, p.xi, p.alpha2, p.alpha3, p.b};
}

ModelEstimates ModelEstimates::reference() {
  ModelEstimates est = from(TrussParams::chaotic_reference());
  est.alpha2 = 1.0e2;
  est.alpha3 = 1.15e4;
  return est;
}

void validate(const ControllerConfig& cfg) {
  if (cfg.order < 1) throw std::invalid_argument("controller order must be at least 1");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(cfg.fuzzy.phi >= 0.0)) throw std::invalid_argument("fuzzy learning rate must be non-negative");
  if (!(cfg.fuzzy.d_max > 0.0)) throw std::invalid_argument("fuzzy clamp must be positive");
  fuzzy::MembershipPartition{cfg.fuzzy.centers};
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

std::vector<double> gain_vector(int n, double lambda) {
  if (n < 1) throw std::invalid_argument("gain_vector: n must be at least 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("gain_vector: lambda must be positive");
  std::vector<double> k(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) k[static_cast<std::size_t>(i)] = binomial(n, i) * std::pow(lambda, n - i);
  return k;
}

double combined_error(std::span<const double> xtilde, std::span<const double> gains) {
  if (xtilde.size() != gains.size()) throw std::invalid_argument("combined_error: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) s += gains[i] * xtilde[i];
  return s;
}

double model_acceleration(const SimState& state, const ModelEstimates& est) {
  TrussParams model;
  model.theta = est.theta;
  model.xi = est.xi;
  model.alpha2 = est.alpha2;
  model.alpha3 = est.alpha3;
  model.b = est.b;
  return -est.xi * state.y + restoring_term(state.x, model);
}

namespace {

struct ErrorTerms {
  std::array<double, 2> xtilde;
  std::array<double, 2> gains;
};

ErrorTerms error_terms(const SimState& state, const Reference& ref, const ControllerConfig& cfg) {
  if (cfg.order != 2) throw std::invalid_argument("the truss controller is second order");
  const auto k = gain_vector(2, cfg.lambda);
  return {{state.x - ref.x, state.y - ref.dx}, {k[0], k[1]}};
}

double fl_law(const SimState& state, const Reference& ref, const ControllerConfig& cfg, const ErrorTerms& e) {
  return -model_acceleration(state, cfg.estimates) + ref.ddx - e.gains[0] * e.xtilde[0] -
         e.gains[1] * e.xtilde[1];
}

}  // namespace

double control_fl(const SimState& state, const Reference& ref, const ControllerConfig& cfg) {
  return fl_law(state, ref, cfg, error_terms(state, ref, cfg));
}

FuzzyState FuzzyState::from(const FuzzySettings& settings) {
  FuzzyState st{fuzzy::MembershipPartition{settings.centers},
                fuzzy::RuleConsequents::zeros(settings.centers.size(), settings.d_max)};
  return st;
}

ControlOutput control_fuzzy_fl(const SimState& state, const Reference& ref, const ControllerConfig& cfg,
                               FuzzyState& fz, double dtau) {
  const auto e = error_terms(state, ref, cfg);
  ControlOutput out;
  out.s = combined_error(e.xtilde, e.gains);
  out.u = fl_law(state, ref, cfg, e);
  if (!cfg.fuzzy_enabled) return out;

  out.d_hat = fuzzy::infer(out.s, fz.partition, fz.consequents);
  out.u -= out.d_hat;
  if (cfg.fuzzy.phi > 0.0) {
    fz.consequents = fuzzy::adapt(fz.consequents, out.s, fz.partition, cfg.fuzzy.phi, dtau);
  }
  return out;
}

std::vector<double> zeta_coefficients(int n) {
  if (n < 1) throw std::invalid_argument("zeta_coefficients: n must be at least 1");
  std::vector<double> zeta(static_cast<std::size_t>(n));
  zeta[0] = 1.0;
  for (int i = 1; i < n; ++i) {
    double acc = 1.0;
    for (int j = 0; j < i; ++j) acc += binomial(i, j) * zeta[static_cast<std::size_t>(j)];
    zeta[static_cast<std::size_t>(i)] = acc;
  }
  return zeta;
}

std::vector<double> convergence_box(int n, double lambda, double epsilon) {
  if (!(lambda > 0.0)) throw std::invalid_argument("convergence_box: lambda must be positive");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("convergence_box: epsilon must be non-negative");
  auto box = zeta_coefficients(n);
  for (int i = 0; i < n; ++i) box[static_cast<std::size_t>(i)] *= std::pow(lambda, i - n) * epsilon;
  return box;
}

}  // namespace smatruss
