#pragma once

#include <cmath>

#include "shellwave/errors.hpp"
#include "shellwave/types.hpp"

/// Dense 4x4 Dirac-matrix algebra in the standard (Dirac) representation.
namespace shellwave::clifford {

/// |d + 4| (or |d - 4|) below this counts as the confinement (critical) value.
inline constexpr double kCriticalTol = 1e-9;
/// Below this |z| the hyperbolic ratios switch to their Taylor series.
inline constexpr double kSeriesThreshold = 1e-6;
/// Largest 1-norm accepted by expm; e^700 is still representable.
inline constexpr double kExpmMaxNorm = 700.0;

Eigen::Matrix2cd pauli(int k);
SpinorMatrix alpha(int k);
SpinorMatrix beta();

/// sum_j v_j alpha_j. v need not be normalized.
SpinorMatrix alpha_dot(const Vec3 &v);

/// B = eta I4 + tau beta.
SpinorMatrix shell_matrix(const CouplingPair &c);

/// M = (i alpha.nu / 2) B, so that M^2 = -(d/4) I4.
SpinorMatrix half_jump(const Vec3 &nu, const CouplingPair &c);

/// Jump matrix R with t f_in = R t f_out, in closed form
/// 4/(4+d) ((4-d)/4 I + i alpha.nu B). Throws ConfinementCase when
/// |d + 4| < tol, where I - M is singular.
SpinorMatrix jump_matrix(const Vec3 &nu, const CouplingPair &c,
                         double tol = kCriticalTol);

/// Coefficients of exp(s X) = cosh_part I + sinhc_part X for any matrix X
/// with X^2 = -d I. Evaluated with complex cosh/sinh so the d > 0 case falls
/// out as cos/sin; Taylor series near z = -d s^2 = 0.
struct ShellScalars {
  double cosh_part;
  double sinhc_part;
};
ShellScalars shell_scalars(double d, double s = 1.0);

/// exp(s X) for X^2 = -d I, any representation (4x4 spinor or 2x2 radial).
template <class Mat>
Mat exp_square_scalar(const Mat &X, double d, double s = 1.0) {
  const ShellScalars sc = shell_scalars(d, s);
  return sc.cosh_part * Mat::Identity() + sc.sinhc_part * X;
}

/// exp(s i alpha.nu B) via the eigenprojection closed form.
SpinorMatrix exp_shell(const Vec3 &nu, const CouplingPair &c, double s = 1.0);

/// Pi_pm = (I +- i alpha.nu B / D) / 2. Requires d != 0.
struct EigenProjections {
  SpinorMatrix plus;
  SpinorMatrix minus;
};
EigenProjections eigenprojections(const Vec3 &nu, const CouplingPair &c);

/// Generic matrix exponential by scaling and squaring with a degree-18
/// Taylor polynomial. Relative accuracy ~1e-14 for ||A||_1 <= 20; throws
/// Overflow above kExpmMaxNorm.
template <class Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived> &A) {
  using Plain = typename Derived::PlainObject;
  const double norm = A.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(norm))
    throw InvalidArgument("expm: non-finite matrix entries");
  if (norm > kExpmMaxNorm)
    throw Overflow("expm: ||A||_1 = " + std::to_string(norm) +
                   " exceeds the supported range");
  int squarings = 0;
  if (norm > 0.5)
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Plain scaled = A / std::ldexp(1.0, squarings);
  Plain term = Plain::Identity(A.rows(), A.cols());
  Plain sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i)
    sum = (sum * sum).eval();
  return sum;
}

} // namespace shellwave::clifford
