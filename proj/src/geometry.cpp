#include "shellwave/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "shellwave/errors.hpp"

namespace shellwave::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFdFirst = 6e-6;
constexpr double kFdSecond = 1e-4;

void check_chart(const Surface &surface, int chart) {
  if (chart < 0 || chart >= surface.chart_count())
    throw InvalidArgument("chart index out of range");
}

// Symmetric 2x2 generalized eigenproblem S v = k G v.
std::pair<double, double> principal(const Mat2 &S, const Mat2 &G) {
  Mat2 sym = 0.5 * (S + S.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> es(sym, G);
  return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

Eigen::Matrix<double, 3, 2> frame(const Tangents &t) {
  Eigen::Matrix<double, 3, 2> T;
  T.col(0) = t.d1;
  T.col(1) = t.d2;
  return T;
}

// Interior sample points of a chart domain: n points per axis, open in the
// first coordinate, half-open in a periodic second coordinate.
template <class F> void for_grid(const ChartDomain &dom, int n, F &&f) {
  for (int i = 0; i < n; ++i) {
    double u = dom.lo(0) + (i + 0.5) * (dom.hi(0) - dom.lo(0)) / n;
    for (int j = 0; j < n; ++j) {
      double v = dom.periodic_second
                     ? dom.lo(1) + j * (dom.hi(1) - dom.lo(1)) / n
                     : dom.lo(1) + (j + 0.5) * (dom.hi(1) - dom.lo(1)) / n;
      f(Vec2(u, v));
    }
  }
}

struct Seed {
  int chart = 0;
  Vec2 s = Vec2::Zero();
  double dist2 = std::numeric_limits<double>::infinity();
};

Seed grid_seed(const Surface &surface, int chart, const Vec3 &x, int n) {
  Seed best;
  best.chart = chart;
  for_grid(surface.domain(chart), n, [&](const Vec2 &s) {
    double d2 = (surface.point(chart, s) - x).squaredNorm();
    if (d2 < best.dist2) {
      best.dist2 = d2;
      best.s = s;
    }
  });
  return best;
}

Vec2 wrap(const ChartDomain &dom, Vec2 s) {
  if (dom.periodic_second) {
    double period = dom.hi(1) - dom.lo(1);
    s(1) = dom.lo(1) + std::fmod(std::fmod(s(1) - dom.lo(1), period) + period,
                                 period);
  }
  return s;
}

// Newton iteration for the foot point; returns nullopt if it stalls.
std::optional<TubularPoint> newton_foot(const Surface &surface, int chart,
                                        Vec2 s, const Vec3 &x, int max_iter) {
  const ChartDomain dom = surface.domain(chart);
  const double scale = 1.0 + x.norm();
  double dist2 = (surface.point(chart, s) - x).squaredNorm();
  for (int it = 0; it < max_iter; ++it) {
    Vec3 r = surface.point(chart, s) - x;
    Tangents t = surface.tangents(chart, s);
    SecondDerivatives dd = surface.second_derivatives(chart, s);
    Vec2 F(t.d1.dot(r), t.d2.dot(r));
    Mat2 J;
    J(0, 0) = t.d1.dot(t.d1) + r.dot(dd.d11);
    J(0, 1) = t.d1.dot(t.d2) + r.dot(dd.d12);
    J(1, 0) = J(0, 1);
    J(1, 1) = t.d2.dot(t.d2) + r.dot(dd.d22);
    Vec2 step = J.fullPivLu().solve(F);
    if (!step.allFinite())
      return std::nullopt;

    // Damped update: never accept a step that increases the distance.
    double lambda = 1.0;
    Vec2 next = s - step;
    double next_dist2 = (surface.point(chart, next) - x).squaredNorm();
    for (int k = 0; k < 40 && next_dist2 > dist2 * (1 + 1e-12) + 1e-30; ++k) {
      lambda *= 0.5;
      next = s - lambda * step;
      next_dist2 = (surface.point(chart, next) - x).squaredNorm();
    }
    s = wrap(dom, next);
    dist2 = next_dist2;
    if (lambda * step.norm() < 1e-12 * (1.0 + s.norm())) {
      if (s(0) <= dom.lo(0) || s(0) >= dom.hi(0))
        return std::nullopt;
      Vec3 foot = surface.point(chart, s);
      Vec3 nu = surface.normal(chart, s);
      double p = (x - foot).dot(nu);
      if ((foot + p * nu - x).norm() > 1e-10 * scale)
        return std::nullopt;
      return TubularPoint{s, p, chart};
    }
  }
  return std::nullopt;
}

std::optional<TubularPoint> project_impl(const Surface &surface,
                                         const Vec3 &x,
                                         const ProjectOptions &opt) {
  int chart = surface.preferred_chart(x);
  Seed seed = grid_seed(surface, chart, x, opt.seed_grid);
  if (auto tp = newton_foot(surface, chart, seed.s, x, opt.max_iter))
    return tp;
  // Fall back to the remaining charts before giving up.
  for (int c = 0; c < surface.chart_count(); ++c) {
    if (c == chart)
      continue;
    Seed other = grid_seed(surface, c, x, opt.seed_grid);
    if (auto tp = newton_foot(surface, c, other.s, x, opt.max_iter))
      return tp;
  }
  return std::nullopt;
}

} // namespace

// ---- Surface defaults ------------------------------------------------------

Tangents Surface::tangents(int chart, const Vec2 &s) const {
  const double h = kFdFirst;
  Vec2 e1(h, 0), e2(0, h);
  return {(point(chart, s + e1) - point(chart, s - e1)) / (2 * h),
          (point(chart, s + e2) - point(chart, s - e2)) / (2 * h)};
}

SecondDerivatives Surface::second_derivatives(int chart, const Vec2 &s) const {
  const double h = kFdSecond;
  Vec2 e1(h, 0), e2(0, h);
  Vec3 c = point(chart, s);
  SecondDerivatives out;
  out.d11 = (point(chart, s + e1) - 2 * c + point(chart, s - e1)) / (h * h);
  out.d22 = (point(chart, s + e2) - 2 * c + point(chart, s - e2)) / (h * h);
  out.d12 = (point(chart, s + e1 + e2) - point(chart, s + e1 - e2) -
             point(chart, s - e1 + e2) + point(chart, s - e1 - e2)) /
            (4 * h * h);
  return out;
}

Vec3 Surface::normal(int chart, const Vec2 &s) const {
  Tangents t = tangents(chart, s);
  Vec3 n = t.d1.cross(t.d2);
  double len = n.norm();
  if (!(len > 1e-12 * t.d1.norm() * t.d2.norm()) || len == 0.0)
    throw DegenerateChart("chart is not an immersion at this point");
  n /= len;
  if (n.dot(point(chart, s) - interior_point()) < 0)
    n = -n;
  return n;
}

WeingartenData Surface::weingarten(int chart, const Vec2 &s) const {
  const double h = kWeingartenStep;
  Vec2 e1(h, 0), e2(0, h);
  Tangents t = tangents(chart, s);
  auto T = frame(t);
  Eigen::Matrix<double, 3, 2> N;
  N.col(0) = -(normal(chart, s + e1) - normal(chart, s - e1)) / (2 * h);
  N.col(1) = -(normal(chart, s + e2) - normal(chart, s - e2)) / (2 * h);
  Mat2 G = T.transpose() * T;
  Mat2 S = T.transpose() * N;
  WeingartenData out;
  out.matrix = G.inverse() * S;
  std::tie(out.k1, out.k2) = principal(S, G);
  return out;
}

int Surface::preferred_chart(const Vec3 &x) const {
  Seed best;
  for (int c = 0; c < chart_count(); ++c) {
    Seed s = grid_seed(*this, c, x, 16);
    if (s.dist2 < best.dist2)
      best = s;
  }
  return best.chart;
}

double Surface::tube_width() const {
  std::call_once(width_once_, [this] { width_ = max_tube_width(*this); });
  return width_;
}

// ---- Ellipsoid -------------------------------------------------------------

Ellipsoid::Ellipsoid(double a, double b, double c) : radii_(a, b, c) {
  if (!(a > 0 && b > 0 && c > 0) || !radii_.allFinite())
    throw InvalidArgument("ellipsoid radii must be positive and finite");
}

ChartDomain Ellipsoid::domain(int chart) const {
  check_chart(*this, chart);
  return {Vec2(0.0, -kPi), Vec2(kPi, kPi), true};
}

// Chart 0: (a sin t cos f, b sin t sin f, c cos t)
// Chart 1: (a cos t, b sin t cos f, c sin t sin f)
Vec3 Ellipsoid::point(int chart, const Vec2 &s) const {
  const double a = radii_(0), b = radii_(1), c = radii_(2);
  const double st = std::sin(s(0)), ct = std::cos(s(0));
  const double sf = std::sin(s(1)), cf = std::cos(s(1));
  if (chart == 0)
    return {a * st * cf, b * st * sf, c * ct};
  check_chart(*this, chart);
  return {a * ct, b * st * cf, c * st * sf};
}

Tangents Ellipsoid::tangents(int chart, const Vec2 &s) const {
  const double a = radii_(0), b = radii_(1), c = radii_(2);
  const double st = std::sin(s(0)), ct = std::cos(s(0));
  const double sf = std::sin(s(1)), cf = std::cos(s(1));
  if (chart == 0)
    return {{a * ct * cf, b * ct * sf, -c * st}, {-a * st * sf, b * st * cf, 0}};
  check_chart(*this, chart);
  return {{-a * st, b * ct * cf, c * ct * sf}, {0, -b * st * sf, c * st * cf}};
}

SecondDerivatives Ellipsoid::second_derivatives(int chart,
                                                const Vec2 &s) const {
  const double a = radii_(0), b = radii_(1), c = radii_(2);
  const double st = std::sin(s(0)), ct = std::cos(s(0));
  const double sf = std::sin(s(1)), cf = std::cos(s(1));
  if (chart == 0)
    return {{-a * st * cf, -b * st * sf, -c * ct},
            {-a * ct * sf, b * ct * cf, 0},
            {-a * st * cf, -b * st * sf, 0}};
  check_chart(*this, chart);
  return {{-a * ct, -b * st * cf, -c * st * sf},
          {0, -b * ct * sf, c * ct * cf},
          {0, -b * st * cf, -c * st * sf}};
}

Vec3 Ellipsoid::normal(int chart, const Vec2 &s) const {
  Tangents t = tangents(chart, s);
  Vec3 cr = t.d1.cross(t.d2);
  if (!(cr.norm() > 1e-12 * t.d1.norm() * t.d2.norm()))
    throw DegenerateChart("ellipsoid chart evaluated at a pole");
  Vec3 x = point(chart, s);
  Vec3 g = x.cwiseQuotient(radii_.cwiseProduct(radii_));
  return g.normalized();
}

int Ellipsoid::preferred_chart(const Vec3 &x) const {
  Vec3 g = x.cwiseQuotient(radii_.cwiseProduct(radii_));
  return std::abs(g(2)) <= std::abs(g(0)) ? 0 : 1;
}

// ---- Sphere ----------------------------------------------------------------

Sphere::Sphere(double radius) : Ellipsoid(radius, radius, radius),
                                radius_(radius) {}

WeingartenData Sphere::weingarten(int, const Vec2 &) const {
  return {-Mat2::Identity() / radius_, -1.0 / radius_, -1.0 / radius_};
}

// ---- ParametricSurface -----------------------------------------------------

ParametricSurface::ParametricSurface(std::string name, std::vector<Chart> charts,
                                     Vec3 interior)
    : name_(std::move(name)), charts_(std::move(charts)), interior_(interior) {
  if (charts_.empty())
    throw InvalidArgument("surface needs at least one chart");
  for (const auto &c : charts_)
    if (!c.map || !(c.domain.lo.array() < c.domain.hi.array()).all())
      throw InvalidArgument("invalid chart");
}

ChartDomain ParametricSurface::domain(int chart) const {
  check_chart(*this, chart);
  return charts_[chart].domain;
}

Vec3 ParametricSurface::point(int chart, const Vec2 &s) const {
  check_chart(*this, chart);
  return charts_[chart].map(s);
}

// ---- free functions --------------------------------------------------------

std::shared_ptr<const Surface> make_surface(const std::string &kind,
                                            const std::vector<double> &radii) {
  if (kind == "sphere") {
    if (radii.size() != 1)
      throw InvalidArgument("sphere takes one radius");
    if (!(radii[0] > 0) || !std::isfinite(radii[0]))
      throw InvalidArgument("sphere radius must be positive");
    return std::make_shared<Sphere>(radii[0]);
  }
  if (kind == "ellipsoid") {
    if (radii.size() != 3)
      throw InvalidArgument("ellipsoid takes three radii");
    return std::make_shared<Ellipsoid>(radii[0], radii[1], radii[2]);
  }
  throw InvalidArgument("unknown surface kind: " + kind);
}

Vec3 normal(const Surface &surface, int chart, const Vec2 &s) {
  return surface.normal(chart, s);
}

WeingartenData weingarten(const Surface &surface, int chart, const Vec2 &s) {
  return surface.weingarten(chart, s);
}

Vec3 tubular_map(const Surface &surface, int chart, const Vec2 &s, double p) {
  if (!(std::abs(p) < surface.tube_width()))
    throw TubeExceeded("normal offset outside the tubular neighbourhood");
  return surface.point(chart, s) + p * surface.normal(chart, s);
}

Mat3 tubular_jacobian(const Surface &surface, int chart, const Vec2 &s,
                      double p) {
  auto T = frame(surface.tangents(chart, s));
  Mat2 W = surface.weingarten(chart, s).matrix;
  Eigen::Matrix<double, 3, 2> TS = T * (Mat2::Identity() - p * W);
  Mat3 J;
  J.leftCols<2>() = TS;
  J.col(2) = surface.normal(chart, s);
  return J;
}

TubularPoint project(const Surface &surface, const Vec3 &x,
                     const ProjectOptions &options) {
  auto tp = project_impl(surface, x, options);
  if (!tp)
    throw NonConvergence("nearest-point projection did not converge");
  if (!(std::abs(tp->p) < surface.tube_width()))
    throw OutsideTube("point lies outside the tubular neighbourhood");
  return *tp;
}

std::optional<TubularPoint> try_project(const Surface &surface, const Vec3 &x,
                                        double max_distance,
                                        const ProjectOptions &options) {
  auto tp = project_impl(surface, x, options);
  if (!tp)
    throw NonConvergence("nearest-point projection did not converge");
  if (!(std::abs(tp->p) < std::min(max_distance, surface.tube_width())))
    return std::nullopt;
  return tp;
}

ProjectionGradient projection_gradient(const Surface &surface,
                                       const TubularPoint &tp) {
  auto T = frame(surface.tangents(tp.chart, tp.s));
  Mat2 G = T.transpose() * T;
  Mat2 W = surface.weingarten(tp.chart, tp.s).matrix;
  Mat2 A = Mat2::Identity() - tp.p * W;
  ProjectionGradient out;
  out.chart = A.inverse() * G.inverse() * T.transpose();
  out.normal = surface.normal(tp.chart, tp.s);
  return out;
}

double max_tube_width(const Surface &surface) {
  constexpr int n = 64;
  double kmax = 0.0;
  for (int c = 0; c < surface.chart_count(); ++c) {
    ChartDomain dom = surface.domain(c);
    for (int i = 1; i < n; ++i) {
      double u = dom.lo(0) + i * (dom.hi(0) - dom.lo(0)) / n;
      for (int j = 0; j < n; ++j) {
        double v = dom.lo(1) + j * (dom.hi(1) - dom.lo(1)) / n;
        WeingartenData w = surface.weingarten(c, Vec2(u, v));
        kmax = std::max({kmax, std::abs(w.k1), std::abs(w.k2)});
      }
    }
  }
  if (!(kmax > 0))
    return std::numeric_limits<double>::infinity();
  return 0.5 / kmax;
}

} // namespace shellwave::geometry
