#pragma once

// Polynomial (Falk-type) constitutive law for the shape memory bars and the
// bar kinematics. Dimensional: stresses in MPa, temperatures in K, angles in
// rad.

namespace smatruss {

struct MaterialProperties {
  double a1 = 0.0;   ///< MPa/K
  double a2 = 0.0;   ///< MPa
  double a3 = 0.0;   ///< MPa
  double t_m = 0.0;  ///< K, below which martensite is stable

  bool operator==(const MaterialProperties&) const = default;

  /// Cu-Zn-Al-Ni constants used throughout the truss experiments.
  static MaterialProperties cu_zn_al_ni();
};

struct TrussGeometry {
  double length = 0.0;   ///< L0, m
  double phi0 = 0.0;     ///< rad, nominal bar angle
  double area = 0.0;     ///< m^2
  double mass = 0.0;     ///< kg, lumped at the apex
  double damping = 0.0;  ///< N s/m

  /// Horizontal projection of one bar, L0 cos(phi0).
  double horizontal_projection() const;

  bool operator==(const TrussGeometry&) const = default;
};

/// Throws std::invalid_argument unless every constant is strictly positive.
void validate(const MaterialProperties& mat);
/// Throws std::invalid_argument on a degenerate geometry.
void validate(const TrussGeometry& geom);

/// sigma = a1 (T - T_M) eps - a2 eps^3 + a3 eps^5, in MPa.
double stress(double eps, double temperature, const MaterialProperties& mat);

/// Temperature above which the free energy has a single minimum at eps = 0.
double austenite_temperature(const MaterialProperties& mat);

/// Bar strain cos(phi0)/cos(phi) - 1. Throws std::domain_error unless
/// 0 < phi < pi/2.
double strain_from_angle(double phi, double phi0);

}  // namespace smatruss
