#include "shellwave/coupling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shellwave/clifford.hpp"
#include "shellwave/errors.hpp"

namespace shellwave::coupling {

std::string_view to_string(CouplingClass c) {
  switch (c) {
  case CouplingClass::Negative:
    return "Negative";
  case CouplingClass::Zero:
    return "Zero";
  case CouplingClass::PositiveRegular:
    return "PositiveRegular";
  case CouplingClass::ExcludedInput:
    return "ExcludedInput";
  case CouplingClass::ConfinementInput:
    return "ConfinementInput";
  case CouplingClass::LimitCritical:
    return "LimitCritical";
  case CouplingClass::LimitConfinement:
    return "LimitConfinement";
  }
  return "?";
}

double renormalization_factor(double d) {
  const double minus_d = -d;
  if (minus_d > 1600.0) {
    // cosh/sinh overflow long before tanh saturates
    const double x = std::sqrt(minus_d) / 2.0;
    return std::tanh(x) / x;
  }
  const clifford::ShellScalars sc = clifford::shell_scalars(d);
  return 2.0 * sc.sinhc_part / (1.0 + sc.cosh_part);
}

double distance_to_excluded(double d, int max_k) {
  constexpr double pi2 = std::numbers::pi * std::numbers::pi;
  double best = std::abs(d - pi2);
  for (int k = 1; k <= max_k; ++k) {
    const double odd = 2.0 * k + 1.0;
    best = std::min(best, std::abs(d - odd * odd * pi2));
  }
  return best;
}

Classification classify(const CouplingPair &c, const Tolerances &tol) {
  const double d = c.d();
  const bool confinement_input = std::abs(d + 4.0) < tol.critical;
  if (d > 0.0 && distance_to_excluded(d, tol.max_k) < tol.excluded)
    return {CouplingClass::ExcludedInput, confinement_input};
  if (std::abs(d) < tol.critical)
    return {CouplingClass::Zero, confinement_input};

  const double lambda = renormalization_factor(d);
  const double d_hat = lambda * lambda * d;
  if (std::abs(d_hat + 4.0) < tol.critical)
    return {CouplingClass::LimitConfinement, confinement_input};
  if (std::abs(d_hat - 4.0) < tol.critical || std::abs(d_hat) < tol.critical)
    return {CouplingClass::LimitCritical, confinement_input};
  return {d < 0.0 ? CouplingClass::Negative : CouplingClass::PositiveRegular,
          confinement_input};
}

RenormalizedPair renormalize(const CouplingPair &c, const Tolerances &tol) {
  const double d = c.d();
  if (d > 0.0 && distance_to_excluded(d, tol.max_k) < tol.excluded)
    throw ExcludedInput("renormalize: d = " + std::to_string(d) +
                        " is an excluded value (2k+1)^2 pi^2");
  const double lambda = renormalization_factor(d);
  RenormalizedPair r{lambda * c.eta, lambda * c.tau, false};
  const double d_hat = r.d_hat();
  r.limit_degenerate = std::abs(d_hat) < tol.critical ||
                       std::abs(d_hat - 4.0) < tol.critical ||
                       std::abs(d_hat + 4.0) < tol.critical;
  return r;
}

CouplingPair inverse_renormalize(const RenormalizedPair &r) {
  const double d_hat = r.d_hat();
  if (d_hat <= -4.0)
    throw NoPreimage("inverse_renormalize: d_hat = " + std::to_string(d_hat) +
                     " <= -4 is outside the image of the renormalization");
  if (d_hat == 0.0)
    return {r.eta_hat, r.tau_hat};
  // d_hat = -4 tanh^2(x) (d < 0) or 4 tan^2(x) (d > 0), x = sqrt(|d|)/2
  const double y = std::sqrt(std::abs(d_hat)) / 2.0;
  const double x = d_hat < 0.0 ? std::atanh(y) : std::atan(y);
  const double lambda = y / x;
  return {r.eta_hat / lambda, r.tau_hat / lambda};
}

} // namespace shellwave::coupling
