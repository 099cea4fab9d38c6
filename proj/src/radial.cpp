#include "shellwave/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shellwave/clifford.hpp"
#include "shellwave/errors.hpp"
#include "shellwave/quadrature.hpp"

namespace shellwave::radial {

namespace {

double gap_momentum(double E, const Channel &ch) {
  if (!(std::abs(E) < ch.m))
    throw InvalidArgument("energy must lie in the spectral gap (-m, m)");
  return std::sqrt((ch.m - E) * (ch.m + E));
}

Vec2 unit(const Vec2 &v) { return v / v.norm(); }

double cross(const Vec2 &a, const Vec2 &b) { return a(0) * b(1) - a(1) * b(0); }

void check_window(const Channel &ch, EnergyWindow w, const SolverOptions &opt) {
  const double lim = ch.m - opt.window_margin;
  if (!(w.lo < w.hi) || w.lo < -lim || w.hi > lim)
    throw InvalidArgument("energy window must lie inside (-m + margin, m - "
                          "margin)");
  if (opt.scan_nodes < 2)
    throw InvalidArgument("scan_nodes must be at least 2");
}

const quadrature::GaussLegendre &gauss16() {
  static const quadrature::GaussLegendre rule = quadrature::gauss_legendre(16);
  return rule;
}

double gauss_norm2(const std::function<Vec2(double)> &psi, double a, double b,
                   int panels) {
  if (!(b > a))
    return 0.0;
  return quadrature::composite_gauss(
      [&](double r) { return psi(r).squaredNorm(); }, a, b, panels, gauss16());
}

} // namespace

void Channel::validate() const {
  if (kappa == 0 || std::abs(kappa) > kMaxKappa)
    throw InvalidArgument("kappa must be a nonzero integer with |kappa| <= 10");
  if (!(m > 0) || !std::isfinite(m))
    throw InvalidArgument("mass must be positive");
  if (!(R0 > 0) || !std::isfinite(R0))
    throw InvalidArgument("shell radius must be positive");
}

Vec2 free_solution(double E, const Channel &ch, Region region, double r) {
  ch.validate();
  const double q = gap_momentum(E, ch);
  if (!(r > 0))
    throw InvalidArgument("radius must be positive");
  const double x = q * r;
  const double ratio = x / (E + ch.m);
  if (region == Region::Interior) {
    return {r * bessel_pair(ch.l(), x).i, -ratio * bessel_pair(ch.lbar(), x).i};
  }
  return {r * bessel_pair(ch.l(), x).k, ratio * bessel_pair(ch.lbar(), x).k};
}

Vec2 free_solution_scaled(double E, const Channel &ch, Region region,
                          double r) {
  ch.validate();
  const double q = gap_momentum(E, ch);
  if (!(r > 0))
    throw InvalidArgument("radius must be positive");
  const double x = q * r;
  const double ratio = x / (E + ch.m);
  if (region == Region::Interior) {
    const double w = std::exp(q * (r - ch.R0));
    return w * Vec2(r * bessel_pair_scaled(ch.l(), x).i,
                    -ratio * bessel_pair_scaled(ch.lbar(), x).i);
  }
  const double w = std::exp(-q * (r - ch.R0));
  return w * Vec2(r * bessel_pair_scaled(ch.l(), x).k,
                  ratio * bessel_pair_scaled(ch.lbar(), x).k);
}

Mat2 radial_system(const Channel &ch, const CouplingPair &c, double E,
                   double r, double h) {
  const double V = c.eta * h, S = c.tau * h;
  const double kr = ch.kappa / r;
  Mat2 A;
  A << -kr, -(E - V + ch.m + S), E - V - ch.m - S, kr;
  return A;
}

Mat2 radial_generator(const CouplingPair &c) {
  Mat2 X;
  X << 0.0, -(c.eta - c.tau), c.eta + c.tau, 0.0;
  return X;
}

JumpMatrix2 radial_jump(const CouplingPair &c, bool renormalized) {
  const Mat2 X = radial_generator(c);
  const double d = c.d();
  if (renormalized)
    return clifford::exp_square_scalar(X, d);
  if (std::abs(d + 4.0) < clifford::kCriticalTol)
    throw ConfinementCase("radial_jump: d = -4, the bare jump is singular");
  return 4.0 / (4.0 + d) * ((4.0 - d) / 4.0 * Mat2::Identity() + X);
}

EnergyWindow full_gap(const Channel &ch, const SolverOptions &opt) {
  return {-ch.m + opt.window_margin, ch.m - opt.window_margin};
}

double delta_matching(const Channel &ch, const CouplingPair &c_hat, double E) {
  const Mat2 L = radial_jump(c_hat, false);
  Vec2 a = unit(L * unit(free_solution_scaled(E, ch, Region::Exterior, ch.R0)));
  Vec2 b = unit(free_solution_scaled(E, ch, Region::Interior, ch.R0));
  return cross(a, b);
}

std::vector<Eigenvalue> scan_roots(const std::function<double(double)> &f,
                                   EnergyWindow window,
                                   const SolverOptions &opt) {
  const int n = opt.scan_nodes;
  std::vector<double> E(n), v(n);
  for (int i = 0; i < n; ++i) {
    E[i] = i == n - 1 ? window.hi
                      : window.lo + (window.hi - window.lo) * i / (n - 1);
    v[i] = f(E[i]);
  }
  std::vector<Eigenvalue> roots;
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0.0) {
      roots.push_back({E[i], 0.0});
      continue;
    }
    if (i + 1 < n && v[i + 1] != 0.0 && (v[i] < 0) != (v[i + 1] < 0)) {
      double lo = E[i], hi = E[i + 1], flo = v[i];
      while (hi - lo > opt.root_tol) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      double root = 0.5 * (lo + hi);
      roots.push_back({root, std::abs(f(root))});
    }
  }
  return roots;
}

std::vector<Eigenvalue> delta_eigenvalues(const Channel &ch,
                                          const CouplingPair &c_hat,
                                          EnergyWindow window,
                                          const SolverOptions &opt) {
  ch.validate();
  check_window(ch, window, opt);
  radial_jump(c_hat, false); // surface ConfinementCase before scanning
  return scan_roots([&](double E) { return delta_matching(ch, c_hat, E); },
                    window, opt);
}

// ---- regularized layer ------------------------------------------------------

Layer::Layer(Channel ch, CouplingPair c, double eps,
             const mollifier::Profile &profile, const SolverOptions &opt)
    : ch_(ch), c_(c), eps_(eps), profile_(profile) {
  ch_.validate();
  if (!(eps > 0) || !(eps < ch_.R0 / 2))
    throw InvalidArgument("layer half-width must satisfy 0 < eps < R0/2");
  steps_ = std::max(opt.min_layer_steps,
                    64 * static_cast<int>(std::ceil(profile_.sup())));
  const double dt = 1.0 / steps_;
  if (eps_ * dt < 1e-15 * ch_.R0)
    throw StepUnderflow("layer step below floating-point resolution");
  h_lo_.resize(2 * steps_ + 1);
  h_hi_.resize(2 * steps_ + 1);
  for (int k = 0; k <= 2 * steps_; ++k) {
    h_lo_[k] = profile_.inside(-1.0 + 0.5 * k * dt, -1.0, 0.0);
    h_hi_[k] = profile_.inside(0.5 * k * dt, 0.0, 1.0);
  }
}

Mat2 Layer::system(double E, double r, double h) const {
  return radial_system(ch_, c_, E, r, h);
}

Layer::Path Layer::integrate(double E, const Vec2 &y0) const {
  const double dt = 1.0 / steps_;
  Path path;
  path.r.reserve(2 * steps_ + 2);
  Vec2 y = y0;
  for (int half = 0; half < 2; ++half) {
    const auto &hv = half == 0 ? h_lo_ : h_hi_;
    const double t0 = half == 0 ? -1.0 : 0.0;
    auto F = [&](int idx, const Vec2 &v) {
      double t = t0 + 0.5 * idx * dt;
      return Vec2(eps_ * (system(E, ch_.R0 + eps_ * t, hv[idx] / eps_) * v));
    };
    for (int k = 0; k < steps_; ++k) {
      Vec2 k1 = F(2 * k, y);
      path.r.push_back(ch_.R0 + eps_ * (t0 + k * dt));
      path.y.push_back(y);
      path.dy.push_back(k1 / eps_);
      Vec2 k2 = F(2 * k + 1, y + 0.5 * dt * k1);
      Vec2 k3 = F(2 * k + 1, y + 0.5 * dt * k2);
      Vec2 k4 = F(2 * k + 2, y + dt * k3);
      y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    path.r.push_back(ch_.R0 + eps_ * (t0 + 1.0));
    path.y.push_back(y);
    path.dy.push_back(F(2 * steps_, y) / eps_);
  }
  if (!y.allFinite())
    throw StepUnderflow("layer integration produced non-finite values");
  return path;
}

Mat2 Layer::transfer(double E) const {
  const double dt = 1.0 / steps_;
  Mat2 Y = Mat2::Identity();
  for (int half = 0; half < 2; ++half) {
    const auto &hv = half == 0 ? h_lo_ : h_hi_;
    const double t0 = half == 0 ? -1.0 : 0.0;
    auto F = [&](int idx, const Mat2 &M) {
      double t = t0 + 0.5 * idx * dt;
      return Mat2(eps_ * (system(E, ch_.R0 + eps_ * t, hv[idx] / eps_) * M));
    };
    for (int k = 0; k < steps_; ++k) {
      Mat2 k1 = F(2 * k, Y);
      Mat2 k2 = F(2 * k + 1, Y + 0.5 * dt * k1);
      Mat2 k3 = F(2 * k + 1, Y + 0.5 * dt * k2);
      Mat2 k4 = F(2 * k + 2, Y + dt * k3);
      Y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }
  if (!Y.allFinite())
    throw StepUnderflow("layer transfer produced non-finite values");
  return Y;
}

double Layer::matching(double E) const {
  Vec2 a = unit(transfer(E) *
                unit(free_solution_scaled(E, ch_, Region::Interior,
                                          ch_.R0 - eps_)));
  Vec2 b = unit(free_solution_scaled(E, ch_, Region::Exterior, ch_.R0 + eps_));
  return cross(a, b);
}

Mat2 layer_transfer(const Channel &ch, const CouplingPair &c, double eps,
                    const mollifier::Profile &profile, double E,
                    const SolverOptions &opt) {
  return Layer(ch, c, eps, profile, opt).transfer(E);
}

std::vector<Eigenvalue> regularized_eigenvalues(
    const Channel &ch, const CouplingPair &c, double eps,
    const mollifier::Profile &profile, EnergyWindow window,
    const SolverOptions &opt) {
  ch.validate();
  check_window(ch, window, opt);
  Layer layer(ch, c, eps, profile, opt);
  return scan_roots([&](double E) { return layer.matching(E); }, window, opt);
}

// ---- eigenfunctions ---------------------------------------------------------

RadialEigenfunction RadialEigenfunction::delta(const Channel &ch,
                                               const CouplingPair &c_hat,
                                               double E) {
  ch.validate();
  RadialEigenfunction ef;
  ef.ch_ = ch;
  ef.E_ = E;
  ef.q_ = gap_momentum(E, ch);
  const Mat2 L = radial_jump(c_hat, false);
  const Vec2 in = free_solution_scaled(E, ch, Region::Interior, ch.R0);
  const Vec2 target = L * free_solution_scaled(E, ch, Region::Exterior, ch.R0);
  ef.c_int_ = target.dot(in) / in.squaredNorm();
  ef.c_ext_ = 1.0;
  ef.residual_ = (ef.c_int_ * in - target).norm() / target.norm();
  if (!(ef.residual_ <= kMatchTol))
    throw NotAnEigenvalue("trace mismatch " + std::to_string(ef.residual_) +
                          " at E = " + std::to_string(E));
  ef.scale_ = 1.0 / std::sqrt(ef.raw_norm2());
  return ef;
}

RadialEigenfunction RadialEigenfunction::regularized(
    const Channel &ch, const CouplingPair &c, double eps,
    const mollifier::Profile &profile, double E, const SolverOptions &opt) {
  ch.validate();
  RadialEigenfunction ef;
  ef.ch_ = ch;
  ef.E_ = E;
  ef.q_ = gap_momentum(E, ch);
  ef.layer_.emplace(ch, c, eps, profile, opt);
  ef.c_int_ = 1.0;
  ef.path_ = ef.layer_->integrate(
      E, free_solution_scaled(E, ch, Region::Interior, ch.R0 - eps));
  const Vec2 out = ef.path_.y.back();
  const Vec2 ext = free_solution_scaled(E, ch, Region::Exterior, ch.R0 + eps);
  ef.c_ext_ = out.dot(ext) / ext.squaredNorm();
  ef.residual_ = (ef.c_ext_ * ext - out).norm() / out.norm();
  if (!(ef.residual_ <= kMatchTol))
    throw NotAnEigenvalue("trace mismatch " + std::to_string(ef.residual_) +
                          " at E = " + std::to_string(E));
  ef.scale_ = 1.0 / std::sqrt(ef.raw_norm2());
  return ef;
}

Vec2 RadialEigenfunction::raw(double r) const {
  if (!(r > 0))
    throw InvalidArgument("radius must be positive");
  const double eps = layer_ ? layer_->eps() : 0.0;
  if (r < ch_.R0 - eps)
    return c_int_ * free_solution_scaled(E_, ch_, Region::Interior, r);
  if (r > ch_.R0 + eps || (!layer_ && r >= ch_.R0))
    return c_ext_ * free_solution_scaled(E_, ch_, Region::Exterior, r);
  // Inside the layer: cubic Hermite on the RK4 nodes.
  const auto &R = path_.r;
  auto it = std::upper_bound(R.begin(), R.end(), r);
  std::size_t j = std::clamp<std::size_t>(it - R.begin(), 1, R.size() - 1);
  const double r0 = R[j - 1], r1 = R[j], hstep = r1 - r0;
  const double s = (r - r0) / hstep;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * path_.y[j - 1] + h10 * hstep * path_.dy[j - 1] +
         h01 * path_.y[j] + h11 * hstep * path_.dy[j];
}

Vec2 RadialEigenfunction::operator()(double r) const { return scale_ * raw(r); }

Vec2 RadialEigenfunction::derivative(double r) const {
  if (!layer_)
    return radial_system(ch_, {0, 0}, E_, r, 0.0) * (*this)(r);
  double h = 0.0;
  if (std::abs(r - ch_.R0) < layer_->eps())
    h = mollifier::scaled_profile(layer_->profile(), layer_->eps())(r - ch_.R0);
  return layer_->system(E_, r, h) * (*this)(r);
}

std::pair<Vec2, Vec2> RadialEigenfunction::traces() const {
  if (layer_) {
    Vec2 v = scale_ * raw(ch_.R0);
    return {v, v};
  }
  return {scale_ * c_int_ *
              free_solution_scaled(E_, ch_, Region::Interior, ch_.R0),
          scale_ * c_ext_ *
              free_solution_scaled(E_, ch_, Region::Exterior, ch_.R0)};
}

double RadialEigenfunction::tail_radius() const {
  const double eps = layer_ ? layer_->eps() : 0.0;
  return ch_.R0 + eps + 40.0 / q_;
}

double RadialEigenfunction::raw_norm2() const {
  auto psi = [this](double r) { return raw(r); };
  const double eps = layer_ ? layer_->eps() : 0.0;
  double n2 = gauss_norm2(psi, 0.0, ch_.R0 - eps, 64);
  if (layer_) {
    n2 += gauss_norm2(psi, ch_.R0 - eps, ch_.R0, 64);
    n2 += gauss_norm2(psi, ch_.R0, ch_.R0 + eps, 64);
  }
  n2 += gauss_norm2(psi, ch_.R0 + eps, tail_radius(), 256);
  return n2;
}

RadialSpinor RadialEigenfunction::sample(std::span<const double> r) const {
  RadialSpinor out;
  out.r.assign(r.begin(), r.end());
  for (std::size_t i = 1; i < out.r.size(); ++i)
    if (!(out.r[i] > out.r[i - 1]))
      throw InvalidArgument("sample grid must be strictly increasing");
  out.f.reserve(r.size());
  out.g.reserve(r.size());
  for (double x : r) {
    Vec2 v = (*this)(x);
    out.f.push_back(v(0));
    out.g.push_back(v(1));
  }
  return out;
}

} // namespace shellwave::radial
