#include "shellwave/shell_field.hpp"

#include <cmath>

#include "shellwave/clifford.hpp"
#include "shellwave/errors.hpp"

namespace shellwave::shell_field {

namespace {

constexpr double kOnSurfaceTol = 1e-14;
const Complex kI(0.0, 1.0);

void check_eps(const geometry::Surface &surface, double eps) {
  if (!(eps > 0) || !std::isfinite(eps))
    throw InvalidArgument("eps must be positive");
  if (!(eps < surface.tube_width()))
    throw InvalidArgument("eps must be smaller than the tube width " +
                          std::to_string(surface.tube_width()));
}

} // namespace

PotentialField::PotentialField(
    std::shared_ptr<const geometry::Surface> surface, CouplingPair coupling,
    const mollifier::Profile &profile, double eps)
    : surface_(std::move(surface)), coupling_(coupling),
      h_(mollifier::scaled_profile(profile, eps)) {
  check_eps(*surface_, eps);
}

SpinorMatrix PotentialField::at(const Vec3 &x) const {
  auto tp = geometry::try_project(*surface_, x, eps());
  if (!tp)
    return SpinorMatrix::Zero();
  return h_(tp->p) * clifford::shell_matrix(coupling_);
}

TwistField::TwistField(std::shared_ptr<const geometry::Surface> surface,
                       CouplingPair coupling,
                       const mollifier::Profile &profile, double eps,
                       FieldOptions options)
    : surface_(std::move(surface)), coupling_(coupling),
      h_(mollifier::scaled_profile(profile, eps)),
      H_(mollifier::primitive(profile, eps)), options_(options),
      rule_(quadrature::gauss_legendre(options.gauss_nodes)) {
  check_eps(*surface_, eps);
  if (!(options_.fd_step > 0))
    throw InvalidArgument("fd_step must be positive");
}

SpinorMatrix TwistField::generator(int chart, const Vec2 &s) const {
  return kI * clifford::alpha_dot(surface_->normal(chart, s)) *
         clifford::shell_matrix(coupling_);
}

SpinorMatrix TwistField::at(const Vec3 &x) const {
  auto tp = geometry::try_project(*surface_, x, eps());
  if (!tp)
    return SpinorMatrix::Identity();
  if (std::abs(tp->p) < kOnSurfaceTol)
    throw OnSurface("twist field is undefined on the surface");
  return clifford::exp_shell(surface_->normal(tp->chart, tp->s), coupling_,
                             H_(tp->p));
}

TwistTraces TwistField::traces(int chart, const Vec2 &s) const {
  Vec3 nu = surface_->normal(chart, s);
  return {clifford::exp_shell(nu, coupling_, H_.limit_minus()),
          clifford::exp_shell(nu, coupling_, H_.limit_plus())};
}

TwistGradient TwistField::gradient(const Vec3 &x) const {
  TwistGradient out;
  auto tp = geometry::try_project(*surface_, x, eps());
  if (!tp) {
    out.normal.fill(SpinorMatrix::Zero());
    out.remainder.fill(SpinorMatrix::Zero());
    out.R = SpinorMatrix::Zero();
    return out;
  }
  if (std::abs(tp->p) < kOnSurfaceTol)
    throw OnSurface("twist field is not differentiable across the surface");

  const int chart = tp->chart;
  const Vec2 s = tp->s;
  const double H = H_(tp->p);
  const double h = h_(tp->p);
  const Vec3 nu = surface_->normal(chart, s);
  const SpinorMatrix A = generator(chart, s);
  const SpinorMatrix U = clifford::exp_shell(nu, coupling_, H);

  // d_{s_i} A by central differences.
  std::array<SpinorMatrix, 2> dA;
  for (int i = 0; i < 2; ++i) {
    Vec2 e = Vec2::Zero();
    e(i) = options_.fd_step;
    dA[i] = (generator(chart, s + e) - generator(chart, s - e)) /
            (2 * options_.fd_step);
  }
  const auto grad = geometry::projection_gradient(*surface_, *tp);

  // e^{zY} at the Gauss nodes, z in (0, 1).
  const std::size_t n = rule_.nodes.size();
  std::vector<SpinorMatrix> left(n), right(n);
  for (std::size_t q = 0; q < n; ++q) {
    double z = 0.5 * (rule_.nodes[q] + 1.0);
    left[q] = clifford::exp_shell(nu, coupling_, z * H);
    right[q] = clifford::exp_shell(nu, coupling_, (1.0 - z) * H);
  }

  out.R = SpinorMatrix::Zero();
  for (int j = 0; j < 3; ++j) {
    out.normal[j] = -h * nu(j) * A * U;
    SpinorMatrix dY = H * (grad.chart(0, j) * dA[0] + grad.chart(1, j) * dA[1]);
    SpinorMatrix E = SpinorMatrix::Zero();
    for (std::size_t q = 0; q < n; ++q)
      E += 0.5 * rule_.weights[q] * left[q] * dY * right[q];
    out.remainder[j] = E;
    out.R += -kI * clifford::alpha(j + 1) * E;
  }
  return out;
}

SpinorMatrix potential_at(const PotentialField &V, const Vec3 &x) {
  return V.at(x);
}

SpinorMatrix twist_at(const TwistField &U, const Vec3 &x) { return U.at(x); }

TwistTraces twist_traces(const TwistField &U, const Vec3 &x_sigma) {
  auto tp = geometry::project(U.surface(), x_sigma);
  return U.traces(tp.chart, tp.s);
}

SpinorMatrix twist_gradient(const TwistField &U, const Vec3 &x, int j) {
  if (j < 0 || j > 2)
    throw InvalidArgument("axis must be 0, 1 or 2");
  return U.gradient(x).component(j);
}

} // namespace shellwave::shell_field
