#pragma once

#include <vector>

#include "smatruss/constitutive.hpp"

// Nondimensional equation of motion of the symmetric SMA two-bar truss:
//
//   x' = y
//   y' = gamma sin(Omega tau) - xi y + R(x) + u
//
// with R the bar restoring acceleration. Control enters with unit gain.

namespace smatruss {

struct TrussParams {
  double theta = 1.0;   ///< T / T_M
  double xi = 0.0;      ///< damping
  double gamma = 0.0;   ///< forcing amplitude
  double omega = 0.0;   ///< forcing frequency ratio (Omega)
  double alpha2 = 0.0;  ///< a2 / (a1 T_M)
  double alpha3 = 0.0;  ///< a3 / (a1 T_M)
  double b = 0.0;       ///< B / L0

  bool operator==(const TrussParams&) const = default;

  /// theta=0.69, xi=0.05, gamma=0.02, Omega=0.5, alpha2=124, alpha3=14500,
  /// b=0.866: the chaotic operating point used for the control experiments.
  static TrussParams chaotic_reference();
};

void validate(const TrussParams& params);

struct SimState {
  double x = 0.0;    ///< apex displacement / L0
  double y = 0.0;    ///< dx/dtau
  double tau = 0.0;  ///< nondimensional time

  bool operator==(const SimState&) const = default;
};

struct StateDerivative {
  double dx = 0.0;
  double dy = 0.0;
};

/// Maps dimensional material, geometry and load data onto TrussParams.
/// `force_amplitude` in N, `frequency` in rad/s.
TrussParams nondimensionalize(const MaterialProperties& mat, const TrussGeometry& geom,
                              double temperature, double force_amplitude, double frequency);

/// Natural frequency scale omega_0 (rad/s) used by nondimensionalize.
double natural_frequency(const MaterialProperties& mat, const TrussGeometry& geom);

/// Restoring acceleration R(x). Odd in x, vanishes at x = 0.
double restoring_term(double x, const TrussParams& params);

/// Right-hand side of the equation of motion with control input u.
StateDerivative derivative(const SimState& state, const TrussParams& params, double u,
                           bool include_forcing = true);

struct Equilibrium {
  double x = 0.0;
  double slope = 0.0;  ///< dR/dx at the root
  bool stable = false; ///< slope < 0
};

struct EquilibriumSearch {
  double lower = -2.0;
  double upper = 2.0;
  double resolution = 1e-4;
  double tolerance = 1e-10;
};

/// All roots of R on the search interval, sorted ascending. Throws
/// std::runtime_error when an even number of roots is found, which for an odd
/// R means the scan stepped over a tangency.
std::vector<Equilibrium> equilibria(const TrussParams& params, const EquilibriumSearch& search = {});

}  // namespace smatruss
