#include "shellwave/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "shellwave/clifford.hpp"
#include "shellwave/coupling.hpp"
#include "shellwave/geometry.hpp"
#include "shellwave/mollifier.hpp"
#include "shellwave/shell_field.hpp"

namespace shellwave::checks {

namespace {

constexpr double kPi = std::numbers::pi;

class Worst {
public:
  Worst(std::string name, double threshold)
      : name_(std::move(name)), threshold_(threshold) {}
  void add(double v) {
    // NaN must fail the check.
    if (!(v <= worst_))
      worst_ = std::isnan(v) ? v : std::max(worst_, v);
  }
  CheckLine line() const {
    return {name_, worst_, threshold_, worst_ < threshold_};
  }

private:
  std::string name_;
  double threshold_;
  double worst_ = 0.0;
};

Vec3 random_unit(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-6);
  return v.normalized();
}

/// (eta, tau) in [-3, 3]^2 away from d = +-4 and the excluded set.
CouplingPair random_coupling(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (;;) {
    CouplingPair c{u(rng), u(rng)};
    const double d = c.d();
    if (std::abs(d + 4) > 0.1 && std::abs(d - 4) > 0.1 &&
        coupling::distance_to_excluded(d) > 0.1)
      return c;
  }
}

} // namespace

bool SuiteReport::pass() const {
  return std::all_of(lines.begin(), lines.end(),
                     [](const CheckLine &l) { return l.pass; });
}

std::string format(const SuiteReport &report) {
  std::string out;
  char buf[256];
  for (const auto &l : report.lines) {
    std::snprintf(buf, sizeof buf, "%s %s/%s measured=%.3e threshold=%.1e\n",
                  l.pass ? "PASS" : "FAIL", report.suite.c_str(),
                  l.name.c_str(), l.measured, l.threshold);
    out += buf;
  }
  return out;
}

SuiteReport identities_suite(int samples, std::uint64_t seed) {
  using namespace clifford;
  std::mt19937_64 rng(seed);
  const SpinorMatrix I = SpinorMatrix::Identity();

  Worst anti("anticommutation", 0.0); // exact
  for (int j = 1; j <= 3; ++j) {
    anti.add((alpha(j) * beta() + beta() * alpha(j)).norm());
    for (int k = 1; k <= 3; ++k)
      anti.add((alpha(j) * alpha(k) + alpha(k) * alpha(j) -
                (j == k ? 2.0 : 0.0) * I)
                   .norm());
  }
  anti.add((beta() * beta() - I).norm());
  CheckLine anti_line = anti.line();
  anti_line.pass = anti_line.measured == 0.0;

  Worst factor("half_jump_factorization", 1e-12);
  Worst shell("exp_shell_vs_jump", 1e-10);
  Worst expm_line("exp_shell_vs_expm", 1e-11);
  Worst traces("trace_compatibility", 1e-10);

  auto sphere = geometry::make_surface("sphere", {1.0});
  const std::vector<mollifier::Profile> profiles{
      mollifier::box(), mollifier::triangle(), mollifier::asymmetric_linear()};
  std::uniform_real_distribution<double> eps_dist(0.01, 0.4);
  std::uniform_int_distribution<int> pick(0, 2);

  for (int i = 0; i < samples; ++i) {
    const Vec3 nu = random_unit(rng);
    const CouplingPair c = random_coupling(rng);
    const double d = c.d();
    const SpinorMatrix M = half_jump(nu, c);
    factor.add(((I - M) * (I + M) - ((4 + d) / 4) * I).norm());

    const SpinorMatrix E = exp_shell(nu, c);
    const SpinorMatrix R =
        jump_matrix(nu, coupling::renormalize(c).as_coupling());
    shell.add((E - R).norm());
    const SpinorMatrix X = Complex(0, 1) * alpha_dot(nu) * shell_matrix(c);
    expm_line.add((expm(X) - E).norm() / E.norm());

    // Twist-field traces on the unit sphere at the point nu.
    const int chart = std::abs(nu.z()) <= std::abs(nu.x()) ? 0 : 1;
    Vec2 s;
    if (chart == 0)
      s = Vec2(std::acos(std::clamp(nu.z(), -1.0, 1.0)),
               std::atan2(nu.y(), nu.x()));
    else
      s = Vec2(std::acos(std::clamp(nu.x(), -1.0, 1.0)),
               std::atan2(nu.z(), nu.y()));
    shell_field::TwistField U(sphere, c, profiles[pick(rng)], eps_dist(rng));
    const auto t = U.traces(chart, s);
    const SpinorMatrix Rs =
        jump_matrix(sphere->normal(chart, s),
                    coupling::renormalize(c).as_coupling());
    traces.add((t.plus * Rs - t.minus).norm());
  }
  return {"identities",
          {anti_line, factor.line(), shell.line(), expm_line.line(),
           traces.line()}};
}

SuiteReport geometry_suite(int samples, std::uint64_t seed) {
  using namespace geometry;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th(0.2, kPi - 0.2), ph(-kPi, kPi),
      unit(-1.0, 1.0);

  Worst wein("sphere_weingarten", 1e-12);
  Worst round("projection_round_trip", 1e-10);
  Worst grad("projection_gradient_fd", 1e-6);

  for (double R : {0.7, 1.0, 2.5}) {
    Sphere sph(R);
    for (int i = 0; i < std::max(1, samples / 10); ++i) {
      Vec2 s(th(rng), ph(rng));
      auto w = weingarten(sph, 0, s);
      wein.add((w.matrix + Eigen::Matrix2d::Identity() / R).norm());
      wein.add(std::abs(w.k1 + 1 / R) + std::abs(w.k2 + 1 / R));
    }
  }

  for (const auto &surf :
       {make_surface("sphere", {1.3}), make_surface("ellipsoid", {1, 1.2, 2})}) {
    const double gamma = surf->tube_width();
    for (int i = 0; i < samples; ++i) {
      Vec2 s(th(rng), ph(rng));
      const double p = 0.9 * gamma * unit(rng);
      const Vec3 x = tubular_map(*surf, 0, s, p);
      const auto tp = project(*surf, x);
      round.add(std::abs(tp.p - p));
      round.add((surf->point(tp.chart, tp.s) - surf->point(0, s)).norm());
      round.add((tubular_map(*surf, tp.chart, tp.s, tp.p) - x).norm());

      const auto g = projection_gradient(*surf, tp);
      const double h = 1e-6;
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e(j) = h;
        const auto a = project(*surf, x + e), b = project(*surf, x - e);
        if (a.chart != tp.chart || b.chart != tp.chart)
          continue; // chart switch inside the stencil; the normal part still holds
        Vec2 ds = a.s - b.s;
        if (ds(1) > kPi)
          ds(1) -= 2 * kPi;
        if (ds(1) < -kPi)
          ds(1) += 2 * kPi;
        grad.add((ds / (2 * h) - g.chart.col(j)).norm());
        grad.add(std::abs((a.p - b.p) / (2 * h) - g.normal(j)));
      }
    }
  }
  return {"geometry", {wein.line(), round.line(), grad.line()}};
}

SuiteReport mollifier_suite() {
  Worst shipped("shipped_profiles_admissible", 0.5);
  Worst mass("unit_mass", mollifier::kMassTol);
  Worst jump("primitive_jump", 1e-12);
  for (const auto &name : mollifier::shipped_names()) {
    const auto prof = mollifier::by_name(name);
    const auto rep = mollifier::validate_profile(prof);
    shipped.add(rep.pass() ? 0.0 : 1.0);
    mass.add(std::abs(rep.mass - 1.0));
    for (double eps : {0.2, 0.01, 1e-4}) {
      mollifier::Primitive H(prof, eps);
      jump.add(std::abs(H.limit_plus() - H.limit_minus() - 1.0));
    }
  }
  Worst rejected("bad_profiles_rejected", 0.5);
  const mollifier::Profile heavy("mass2", [](double t) {
    return std::abs(t) < 1 ? 1.0 : 0.0;
  }, {-1.0, 1.0}, 1.0);
  const mollifier::Profile leaky("leaky", [](double t) {
    return std::abs(t) < 1.5 ? 1.0 / 3.0 : 0.0;
  }, {-1.0, 1.0}, 1.0);
  rejected.add(mollifier::validate_profile(heavy).pass() ? 1.0 : 0.0);
  rejected.add(mollifier::validate_profile(leaky).pass() ? 1.0 : 0.0);
  return {"mollifier",
          {shipped.line(), mass.line(), jump.line(), rejected.line()}};
}

} // namespace shellwave::checks
