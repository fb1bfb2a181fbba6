#pragma once

#include <span>
#include <vector>

// Single-input zero-order TSK inference over the combined error s.

namespace smatruss::fuzzy {

/// Triangles peaking at each interior center and reaching zero at the
/// neighbouring centers; the outermost sets are shoulders that stay at 1
/// beyond their center. Firing strengths therefore sum to one for every s.
class MembershipPartition {
 public:
  /// Throws std::invalid_argument unless there are at least two strictly
  /// increasing, finite centers.
  explicit MembershipPartition(std::vector<double> centers);

  /// {-1.00, -0.50, -0.02, 0.02, 0.50, 1.0} x 1e-1.
  static MembershipPartition reference();

  std::span<const double> centers() const { return centers_; }
  std::size_t size() const { return centers_.size(); }

  bool operator==(const MembershipPartition&) const = default;

 private:
  std::vector<double> centers_;
};

struct RuleConsequents {
  std::vector<double> values;  ///< D_hat, one per rule
  double d_max = 10.0;         ///< clamp applied by adapt

  static RuleConsequents zeros(std::size_t n, double d_max = 10.0);

  bool operator==(const RuleConsequents&) const = default;
};

/// Raw firing strengths w_r(s). At most two entries are nonzero.
std::vector<double> memberships(double s, const MembershipPartition& part);

/// Normalized strengths psi_r = w_r / sum(w).
std::vector<double> normalized_memberships(double s, const MembershipPartition& part);

/// d_hat(s) = D_hat . psi(s). Throws std::invalid_argument on a size mismatch.
double infer(double s, const MembershipPartition& part, const RuleConsequents& cons);

/// One explicit-Euler step of D_hat' = phi s psi(s), clamped to +-d_max.
RuleConsequents adapt(const RuleConsequents& cons, double s, const MembershipPartition& part,
                      double phi, double dtau);

}  // namespace smatruss::fuzzy
