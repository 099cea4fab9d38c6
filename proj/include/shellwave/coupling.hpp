#pragma once

#include <string_view>

#include "shellwave/types.hpp"

/// Coupling renormalization (eta, tau) -> (eta_hat, tau_hat) for squeezed
/// shell potentials, its principal-branch inverse, and regime classification.
namespace shellwave::coupling {

struct Tolerances {
  double excluded = 1e-9; ///< absolute, on d, around (2k+1)^2 pi^2
  double critical = 1e-9; ///< absolute, on d and d_hat, around 0 and +-4
  int max_k = 64;
};

enum class CouplingClass {
  Negative,
  Zero,
  PositiveRegular,
  ExcludedInput,    ///< d = (2k+1)^2 pi^2: renormalization undefined
  ConfinementInput, ///< d = -4; reported as a flag, never as the tag
  LimitCritical,    ///< d_hat = 4, or d_hat = 0 with d != 0
  LimitConfinement, ///< d_hat = -4 within tolerance (d -> -infinity)
};

std::string_view to_string(CouplingClass c);

struct Classification {
  CouplingClass tag;
  bool confinement_input; ///< input d = -4 (valid input, informational)
};

struct RenormalizedPair {
  double eta_hat = 0.0;
  double tau_hat = 0.0;
  /// d_hat lies within tolerance of 0, 4 or -4.
  bool limit_degenerate = false;

  double d_hat() const { return eta_hat * eta_hat - tau_hat * tau_hat; }
  CouplingPair as_coupling() const { return {eta_hat, tau_hat}; }
};

/// Scalar lambda(d) with (eta_hat, tau_hat) = lambda (eta, tau):
/// tanh(sqrt(-d)/2)/(sqrt(-d)/2), written as 2 sinhc(D)/(1 + cosh D) with the
/// same shell scalars used by clifford::exp_shell.
double renormalization_factor(double d);

/// Distance of d from the nearest excluded value (2k+1)^2 pi^2, k <= max_k.
double distance_to_excluded(double d, int max_k = 64);

Classification classify(const CouplingPair &c, const Tolerances &tol = {});

/// Throws ExcludedInput at d = (2k+1)^2 pi^2.
RenormalizedPair renormalize(const CouplingPair &c,
                             const Tolerances &tol = {});

/// Principal-branch inverse: for d_hat > 0 the preimage has d in (0, pi^2);
/// other preimages (d >= pi^2) exist but are never returned.
/// Throws NoPreimage when d_hat <= -4.
CouplingPair inverse_renormalize(const RenormalizedPair &r);

} // namespace shellwave::coupling
