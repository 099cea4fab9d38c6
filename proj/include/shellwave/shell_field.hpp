#pragma once

#include <array>
#include <memory>

#include "shellwave/geometry.hpp"
#include "shellwave/mollifier.hpp"
#include "shellwave/quadrature.hpp"
#include "shellwave/types.hpp"

/// The squeezed potential V_eps = B h_eps(p) and the twist field
/// U_eps = exp(A(s) H_eps(p)), A(s) = i alpha.nu(phi(s)) B, on the tube of
/// half-width eps around a surface.
///
/// Side naming follows the transmission condition: "plus" is the interior
/// side (p < 0) and "minus" the exterior side (p > 0).
namespace shellwave::shell_field {

struct FieldOptions {
  int gauss_nodes = 16; ///< Gauss-Legendre order of the z-integral in E_j
  double fd_step = 1e-5; ///< step for d_s A
};

class PotentialField {
public:
  /// Requires 0 < eps < surface tube width.
  PotentialField(std::shared_ptr<const geometry::Surface> surface,
                 CouplingPair coupling, const mollifier::Profile &profile,
                 double eps);

  SpinorMatrix at(const Vec3 &x) const;

  const geometry::Surface &surface() const { return *surface_; }
  const CouplingPair &coupling() const { return coupling_; }
  double eps() const { return h_.eps(); }

private:
  std::shared_ptr<const geometry::Surface> surface_;
  CouplingPair coupling_;
  mollifier::ScaledProfile h_;
};

struct TwistTraces {
  SpinorMatrix plus;  ///< interior limit exp(-(int_{-eps}^0 h_eps) A)
  SpinorMatrix minus; ///< exterior limit exp((int_0^eps h_eps) A)
};

/// grad U = normal + remainder, component by component.
struct TwistGradient {
  std::array<SpinorMatrix, 3> normal;    ///< -A h_eps(p) nu_j U
  std::array<SpinorMatrix, 3> remainder; ///< E_j
  SpinorMatrix R;                        ///< -i sum_j alpha_j E_j

  SpinorMatrix component(int j) const { return normal[j] + remainder[j]; }
};

class TwistField {
public:
  TwistField(std::shared_ptr<const geometry::Surface> surface,
             CouplingPair coupling, const mollifier::Profile &profile,
             double eps, FieldOptions options = {});

  /// I4 outside the tube. Throws OnSurface when |p| < 1e-14.
  SpinorMatrix at(const Vec3 &x) const;
  /// One-sided limits at the surface point phi(s) of the given chart, from
  /// the half-line integrals of h_eps.
  TwistTraces traces(int chart, const Vec2 &s) const;
  /// Zero outside the tube; requires p != 0.
  TwistGradient gradient(const Vec3 &x) const;

  /// A(s) = i alpha.nu(phi(s)) B.
  SpinorMatrix generator(int chart, const Vec2 &s) const;

  const geometry::Surface &surface() const { return *surface_; }
  const CouplingPair &coupling() const { return coupling_; }
  const mollifier::Primitive &primitive() const { return H_; }
  double eps() const { return H_.eps(); }

private:
  std::shared_ptr<const geometry::Surface> surface_;
  CouplingPair coupling_;
  mollifier::ScaledProfile h_;
  mollifier::Primitive H_;
  FieldOptions options_;
  quadrature::GaussLegendre rule_;
};

SpinorMatrix potential_at(const PotentialField &V, const Vec3 &x);
SpinorMatrix twist_at(const TwistField &U, const Vec3 &x);
/// Traces at the surface point nearest to x_sigma.
TwistTraces twist_traces(const TwistField &U, const Vec3 &x_sigma);
SpinorMatrix twist_gradient(const TwistField &U, const Vec3 &x, int j);

} // namespace shellwave::shell_field
