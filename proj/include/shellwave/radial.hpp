#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "shellwave/bessel.hpp"
#include "shellwave/mollifier.hpp"
#include "shellwave/types.hpp"

/// Sphere-restricted spectral solver for one partial wave.
///
/// Reduced components: psi = (1/r) (f Omega_kappa, -i g Omega_{-kappa}),
/// so the measure is dr and, with V = eta h, S = tau h,
///   f' = -(kappa/r) f - (E - V + m + S) g
///   g' =  (kappa/r) g + (E - V - m - S) f.
/// In these components i alpha.nu acts as X2 = -i sigma_2 = [[0,-1],[1,0]]
/// and B as diag(eta + tau, eta - tau). The jump matrix maps the exterior
/// trace to the interior one: Phi(R0-) = Lambda Phi(R0+).
namespace shellwave::radial {

struct Channel {
  int kappa = -1;
  double m = 1.0;
  double R0 = 1.0;

  /// Throws InvalidArgument unless kappa != 0, |kappa| <= 10, m > 0, R0 > 0.
  void validate() const;
  /// Orbital orders of the upper and lower components.
  int l() const { return kappa > 0 ? kappa : -kappa - 1; }
  int lbar() const { return kappa > 0 ? kappa - 1 : -kappa; }
};

inline constexpr int kMaxKappa = 10;

using JumpMatrix2 = Mat2;

enum class Region { Interior, Exterior };

/// Free gap solution at radius r:
///   interior (r i_l(qr), -(qr/(E+m)) i_lbar(qr)),
///   exterior (r k_l(qr), +(qr/(E+m)) k_lbar(qr)),  q = sqrt(m^2 - E^2).
Vec2 free_solution(double E, const Channel &ch, Region region, double r);

/// The same solution times the constant e^{-q R0} (interior) or e^{q R0}
/// (exterior), evaluated through the scaled Bessel functions so it stays
/// O(1) near the shell and never overflows.
Vec2 free_solution_scaled(double E, const Channel &ch, Region region,
                          double r);

/// Matrix A of Phi' = A Phi at radius r for shell density h (h = 0 away
/// from the layer). Traceless.
Mat2 radial_system(const Channel &ch, const CouplingPair &c, double E,
                   double r, double h);

/// X2 B~ for the coupling c; squares to -d I.
Mat2 radial_generator(const CouplingPair &c);

/// Bare: (I - N)^{-1} (I + N) with N = X2 B~ / 2, i.e.
/// 4/(4+d) ((4-d)/4 I + X2 B~); throws ConfinementCase at d = -4.
/// Renormalized: exp(X2 B~).
JumpMatrix2 radial_jump(const CouplingPair &c, bool renormalized);

struct SolverOptions {
  int scan_nodes = 2000;
  double root_tol = 1e-12;
  double window_margin = 1e-6; ///< distance kept from the thresholds +-m
  int min_layer_steps = 512;   ///< per half-layer
};

struct EnergyWindow {
  double lo;
  double hi;
};

/// (-m + margin, m - margin).
EnergyWindow full_gap(const Channel &ch, const SolverOptions &opt = {});

struct Eigenvalue {
  double energy;
  double residual; ///< |matching function| at the returned energy
};

/// Gap eigenvalues of the delta-shell operator with strengths c_hat.
std::vector<Eigenvalue> delta_eigenvalues(const Channel &ch,
                                          const CouplingPair &c_hat,
                                          EnergyWindow window,
                                          const SolverOptions &opt = {});

/// Matching function whose zeros are the delta-shell eigenvalues:
/// det[Lambda u_ext | u_int] for unit traces u.
double delta_matching(const Channel &ch, const CouplingPair &c_hat, double E);

/// Regularized shell r -> B h_eps(r - R0) on the layer |r - R0| < eps.
class Layer {
public:
  /// Requires 0 < eps < R0 / 2.
  Layer(Channel ch, CouplingPair c, double eps, const mollifier::Profile &profile,
        const SolverOptions &opt = {});

  /// Propagates (f, g) from R0 - eps to R0 + eps by RK4 in t = (r - R0)/eps.
  Mat2 transfer(double E) const;
  /// Matching function det[T u_int | u_ext] for unit traces u.
  double matching(double E) const;

  /// RK4 solution through the layer starting from y0 at R0 - eps; returns
  /// the nodes t_k (both halves, t = 0 listed once per side) and values.
  struct Path {
    std::vector<double> r;
    std::vector<Vec2> y;
    std::vector<Vec2> dy;
  };
  Path integrate(double E, const Vec2 &y0) const;

  /// Matrix of the radial system at radius r for shell density h = h_eps.
  Mat2 system(double E, double r, double h) const;

  int steps() const { return steps_; }
  const Channel &channel() const { return ch_; }
  const CouplingPair &coupling() const { return c_; }
  double eps() const { return eps_; }
  const mollifier::Profile &profile() const { return profile_; }

private:
  Channel ch_;
  CouplingPair c_;
  double eps_;
  mollifier::Profile profile_;
  int steps_;
  // h(t) at the RK4 stage points t_k, t_k + dt/2 for each half.
  std::vector<double> h_lo_, h_hi_;
};

/// Layer transfer matrix; det = 1 since the system is traceless.
Mat2 layer_transfer(const Channel &ch, const CouplingPair &c, double eps,
                    const mollifier::Profile &profile, double E,
                    const SolverOptions &opt = {});

std::vector<Eigenvalue> regularized_eigenvalues(
    const Channel &ch, const CouplingPair &c, double eps,
    const mollifier::Profile &profile, EnergyWindow window,
    const SolverOptions &opt = {});

/// Sign-scan plus bisection root finder shared by both solvers.
std::vector<Eigenvalue>
scan_roots(const std::function<double(double)> &f, EnergyWindow window,
           const SolverOptions &opt);

struct RadialSpinor {
  std::vector<double> r;
  std::vector<double> f;
  std::vector<double> g;
};

/// Normalized eigenfunction (int f^2 + g^2 dr = 1) glued from free
/// solutions and, for the regularized shell, the layer solution.
class RadialEigenfunction {
public:
  /// Throws NotAnEigenvalue if the traces cannot be matched to 1e-8.
  static RadialEigenfunction delta(const Channel &ch,
                                   const CouplingPair &c_hat, double E);
  static RadialEigenfunction regularized(const Channel &ch,
                                         const CouplingPair &c, double eps,
                                         const mollifier::Profile &profile,
                                         double E,
                                         const SolverOptions &opt = {});

  /// Value at r > 0. At r = R0 (delta case) the exterior limit.
  Vec2 operator()(double r) const;
  /// d/dr from the radial equation (away from R0 in the delta case).
  Vec2 derivative(double r) const;
  /// (Phi(R0-), Phi(R0+)).
  std::pair<Vec2, Vec2> traces() const;
  RadialSpinor sample(std::span<const double> r) const;

  double energy() const { return E_; }
  /// Relative mismatch of the glued traces.
  double match_residual() const { return residual_; }
  const Channel &channel() const { return ch_; }
  /// Radius beyond which the tail is below e^{-40} of its shell value.
  double tail_radius() const;

  static constexpr double kMatchTol = 1e-8;

private:
  RadialEigenfunction() = default;
  double raw_norm2() const;
  Vec2 raw(double r) const;

  Channel ch_;
  double E_ = 0.0;
  double q_ = 0.0;
  double c_int_ = 1.0;
  double c_ext_ = 1.0;
  double scale_ = 1.0;
  double residual_ = 0.0;
  // regularized case
  std::optional<Layer> layer_;
  Layer::Path path_;
};

} // namespace shellwave::radial
