#include "smatruss/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smatruss {

namespace {

constexpr double kMegaPascal = 1e6;

// Nondimensional stress of one bar divided by a1 T_M.
double reduced_stress(double eps, const TrussParams& p) {
  const double e2 = eps * eps;
  return eps * ((p.theta - 1.0) + e2 * (-p.alpha2 + e2 * p.alpha3));
}

}  // namespace

TrussParams TrussParams::chaotic_reference() {
  return TrussParams{0.69, 0.05, 0.020, 0.5, 1.240e2, 1.450e4, 0.866};
}

void validate(const TrussParams& p) {
  if (!(p.b > 0.0 && p.b < 1.0)) throw std::invalid_argument("b must lie in (0, 1)");
  if (!(p.xi >= 0.0)) throw std::invalid_argument("xi must be non-negative");
  if (!(p.alpha2 > 0.0) || !(p.alpha3 > 0.0)) {
    throw std::invalid_argument("alpha2 and alpha3 must be positive");
  }
  if (!(p.theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (!std::isfinite(p.gamma) || !std::isfinite(p.omega)) {
    throw std::invalid_argument("forcing amplitude and frequency must be finite");
  }
}

double natural_frequency(const MaterialProperties& mat, const TrussGeometry& geom) {
  return std::sqrt(2.0 * geom.area * mat.a1 * kMegaPascal * mat.t_m / (geom.mass * geom.length));
}

TrussParams nondimensionalize(const MaterialProperties& mat, const TrussGeometry& geom,
                              double temperature, double force_amplitude, double frequency) {
  validate(mat);
  validate(geom);
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");

  const double w0 = natural_frequency(mat, geom);
  const double a1_tm = mat.a1 * mat.t_m;
  TrussParams p;
  p.theta = temperature / mat.t_m;
  p.alpha2 = mat.a2 / a1_tm;
  p.alpha3 = mat.a3 / a1_tm;
  p.b = geom.horizontal_projection() / geom.length;
  p.gamma = force_amplitude / (geom.mass * geom.length * w0 * w0);
  p.omega = frequency / w0;
  p.xi = geom.damping / (geom.mass * w0);
  return p;
}

double restoring_term(double x, const TrussParams& p) {
  // Each bar stretches to r = L/L0 = sqrt(x^2 + b^2); the vertical component
  // of both bar forces is -(x/r) sigma(r - 1). Expanding sigma gives the usual
  // six-term bracket in powers of r, which cancels badly for alpha3 ~ 1e4.
  const double r2 = x * x + p.b * p.b;
  const double r = std::sqrt(r2);
  const double eps = (r2 - 1.0) / (r + 1.0);
  return -(x / r) * reduced_stress(eps, p);
}

StateDerivative derivative(const SimState& s, const TrussParams& p, double u, bool include_forcing) {
  double accel = -p.xi * s.y + restoring_term(s.x, p) + u;
  if (include_forcing) accel += p.gamma * std::sin(p.omega * s.tau);
  return {s.y, accel};
}

std::vector<Equilibrium> equilibria(const TrussParams& p, const EquilibriumSearch& search) {
  if (!(search.upper > search.lower) || !(search.resolution > 0.0)) {
    throw std::invalid_argument("invalid equilibrium search interval");
  }
  const auto f = [&p](double x) { return restoring_term(x, p); };
  const auto n = static_cast<long>(std::ceil((search.upper - search.lower) / search.resolution));
  const double span = search.upper - search.lower;
  const auto grid = [&](long i) { return search.lower + span * static_cast<double>(i) / static_cast<double>(n); };

  std::vector<double> roots;
  double x_prev = grid(0);
  double f_prev = f(x_prev);
  if (f_prev == 0.0) roots.push_back(x_prev);
  for (long i = 1; i <= n; ++i) {
    const double x_next = grid(i);
    const double f_next = f(x_next);
    if (f_next == 0.0) {
      roots.push_back(x_next);
    } else if (f_prev != 0.0 && std::signbit(f_prev) != std::signbit(f_next)) {
      double lo = x_prev, hi = x_next, f_lo = f_prev;
      while (hi - lo > search.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x_next;
    f_prev = f_next;
  }

  if (roots.size() % 2 == 0) {
    throw std::runtime_error("equilibrium scan found an even number of roots (" +
                             std::to_string(roots.size()) + "); refine the resolution");
  }

  std::vector<Equilibrium> out;
  out.reserve(roots.size());
  constexpr double kSlopeStep = 1e-6;
  for (double x : roots) {
    const double slope = (f(x + kSlopeStep) - f(x - kSlopeStep)) / (2.0 * kSlopeStep);
    out.push_back({x, slope, slope < 0.0});
  }
  return out;
}

}  // namespace smatruss
