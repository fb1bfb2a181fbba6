#include "smatruss/constitutive.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smatruss {

MaterialProperties MaterialProperties::cu_zn_al_ni() {
  return MaterialProperties{523.29, 1.868e7, 2.186e9, 288.0};
}

double TrussGeometry::horizontal_projection() const {
  return length * std::cos(phi0);
}

void validate(const MaterialProperties& mat) {
  if (!(mat.a1 > 0.0) || !(mat.a2 > 0.0) || !(mat.a3 > 0.0) || !(mat.t_m > 0.0)) {
    throw std::invalid_argument("material constants a1, a2, a3 and T_M must be positive");
  }
}

void validate(const TrussGeometry& geom) {
  if (!(geom.length > 0.0)) throw std::invalid_argument("bar length must be positive");
  if (!(geom.area > 0.0)) throw std::invalid_argument("cross-sectional area must be positive");
  if (!(geom.mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(geom.damping >= 0.0)) throw std::invalid_argument("damping must be non-negative");
  if (!(geom.phi0 > 0.0 && geom.phi0 < std::numbers::pi / 2)) {
    throw std::invalid_argument("phi0 must lie in (0, pi/2)");
  }
}

double stress(double eps, double temperature, const MaterialProperties& mat) {
  // Horner in eps^2: a3 eps^4 ~ a1 (T - T_M) at the strains of interest, and
  // the naive power sum loses digits between them.
  const double e2 = eps * eps;
  return eps * (mat.a1 * (temperature - mat.t_m) + e2 * (-mat.a2 + e2 * mat.a3));
}

double austenite_temperature(const MaterialProperties& mat) {
  return mat.t_m + mat.a2 * mat.a2 / (4.0 * mat.a1 * mat.a3);
}

double strain_from_angle(double phi, double phi0) {
  if (!(phi > 0.0 && phi < std::numbers::pi / 2)) {
    throw std::domain_error("bar angle " + std::to_string(phi) + " rad outside (0, pi/2)");
  }
  return std::cos(phi0) / std::cos(phi) - 1.0;
}

}  // namespace smatruss
