#pragma once

#include <complex>

#include <Eigen/Dense>

namespace shellwave {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// 4x4 complex matrix over the Dirac spinor space.
using SpinorMatrix = Eigen::Matrix4cd;
using Spinor = Eigen::Vector4cd;

/// Shell strengths: electrostatic `eta` (multiplies I4) and Lorentz scalar
/// `tau` (multiplies beta). The discriminant is always recomputed.
struct CouplingPair {
  double eta = 0.0;
  double tau = 0.0;

  double d() const { return eta * eta - tau * tau; }
  /// sqrt(-d) on the principal branch; imaginary for d > 0.
  Complex D() const { return std::sqrt(Complex(-d(), 0.0)); }
};

} // namespace shellwave
