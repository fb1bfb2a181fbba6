#include "smatruss/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smatruss::fuzzy {

MembershipPartition::MembershipPartition(std::vector<double> centers) : centers_(std::move(centers)) {
  if (centers_.size() < 2) throw std::invalid_argument("fuzzy partition needs at least two sets");
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (!std::isfinite(centers_[i])) throw std::invalid_argument("fuzzy centers must be finite");
    if (i > 0 && !(centers_[i] > centers_[i - 1])) {
      throw std::invalid_argument("fuzzy centers must be strictly increasing");
    }
  }
}

MembershipPartition MembershipPartition::reference() {
  return MembershipPartition({-1.00e-1, -0.50e-1, -0.02e-1, 0.02e-1, 0.50e-1, 1.0e-1});
}

RuleConsequents RuleConsequents::zeros(std::size_t n, double d_max) {
  return RuleConsequents{std::vector<double>(n, 0.0), d_max};
}

std::vector<double> memberships(double s, const MembershipPartition& part) {
  const auto c = part.centers();
  std::vector<double> w(c.size(), 0.0);
  if (s <= c.front()) {
    w.front() = 1.0;
    return w;
  }
  if (s >= c.back()) {
    w.back() = 1.0;
    return w;
  }
  // First center strictly greater than s; s lies in [c[k-1], c[k]).
  const auto k = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), s) - c.begin());
  const double t = (s - c[k - 1]) / (c[k] - c[k - 1]);
  w[k - 1] = 1.0 - t;
  w[k] = t;
  return w;
}

std::vector<double> normalized_memberships(double s, const MembershipPartition& part) {
  auto w = memberships(s, part);
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return w;
}

double infer(double s, const MembershipPartition& part, const RuleConsequents& cons) {
  if (cons.values.size() != part.size()) {
    throw std::invalid_argument("consequent count does not match the partition");
  }
  const auto psi = normalized_memberships(s, part);
  double out = 0.0;
  for (std::size_t r = 0; r < psi.size(); ++r) out += cons.values[r] * psi[r];
  return out;
}

RuleConsequents adapt(const RuleConsequents& cons, double s, const MembershipPartition& part,
                      double phi, double dtau) {
  if (cons.values.size() != part.size()) {
    throw std::invalid_argument("consequent count does not match the partition");
  }
  if (!(phi >= 0.0)) throw std::invalid_argument("learning rate must be non-negative");
  RuleConsequents next = cons;
  const auto psi = normalized_memberships(s, part);
  for (std::size_t r = 0; r < psi.size(); ++r) {
    next.values[r] = std::clamp(cons.values[r] + phi * s * psi[r] * dtau, -cons.d_max, cons.d_max);
  }
  return next;
}

}  // namespace smatruss::fuzzy
