#include "shellwave/clifford.hpp"

#include <string>

namespace shellwave::clifford {

namespace {
constexpr Complex I(0.0, 1.0);
}

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  switch (k) {
  case 1:
    s << 0, 1, 1, 0;
    break;
  case 2:
    s << 0, -I, I, 0;
    break;
  case 3:
    s << 1, 0, 0, -1;
    break;
  default:
    throw InvalidArgument("pauli: index must be 1, 2 or 3");
  }
  return s;
}

SpinorMatrix alpha(int k) {
  SpinorMatrix a = SpinorMatrix::Zero();
  const Eigen::Matrix2cd s = pauli(k);
  a.topRightCorner<2, 2>() = s;
  a.bottomLeftCorner<2, 2>() = s;
  return a;
}

SpinorMatrix beta() {
  SpinorMatrix b = SpinorMatrix::Zero();
  b.diagonal() << 1, 1, -1, -1;
  return b;
}

SpinorMatrix alpha_dot(const Vec3 &v) {
  return v.x() * alpha(1) + v.y() * alpha(2) + v.z() * alpha(3);
}

SpinorMatrix shell_matrix(const CouplingPair &c) {
  return c.eta * SpinorMatrix::Identity() + c.tau * beta();
}

SpinorMatrix half_jump(const Vec3 &nu, const CouplingPair &c) {
  return (0.5 * I) * alpha_dot(nu) * shell_matrix(c);
}

SpinorMatrix jump_matrix(const Vec3 &nu, const CouplingPair &c, double tol) {
  const double d = c.d();
  if (std::abs(d + 4.0) < tol)
    throw ConfinementCase("jump_matrix: eta^2 - tau^2 = -4 (confinement), "
                          "I - M is not invertible");
  const SpinorMatrix X = I * alpha_dot(nu) * shell_matrix(c);
  return (4.0 / (4.0 + d)) *
         (((4.0 - d) / 4.0) * SpinorMatrix::Identity() + X);
}

ShellScalars shell_scalars(double d, double s) {
  const double z = -d * s * s; // (s X)^2 = z I
  if (std::abs(z) < kSeriesThreshold) {
    return {1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0,
            s * (1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0)};
  }
  const Complex D = std::sqrt(Complex(z, 0.0));
  return {std::cosh(D).real(), s * (std::sinh(D) / D).real()};
}

SpinorMatrix exp_shell(const Vec3 &nu, const CouplingPair &c, double s) {
  const SpinorMatrix X = I * alpha_dot(nu) * shell_matrix(c);
  return exp_square_scalar(X, c.d(), s);
}

EigenProjections eigenprojections(const Vec3 &nu, const CouplingPair &c) {
  const Complex D = c.D();
  if (std::abs(D) == 0.0)
    throw InvalidArgument("eigenprojections: undefined for d = 0");
  const SpinorMatrix X = I * alpha_dot(nu) * shell_matrix(c);
  const SpinorMatrix Id = SpinorMatrix::Identity();
  return {0.5 * (Id + X / D), 0.5 * (Id - X / D)};
}

} // namespace shellwave::clifford
