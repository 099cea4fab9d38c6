// Acceptance suite: one PASS/FAIL line per criterion, with sub-lines for the
// individual conditions and wall times. Exit status is nonzero if any gating
// criterion fails. Lines marked "info" are supplementary and never gate.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "shellwave/clifford.hpp"
#include "shellwave/convergence.hpp"
#include "shellwave/coupling.hpp"
#include "shellwave/errors.hpp"
#include "shellwave/geometry.hpp"
#include "shellwave/mollifier.hpp"
#include "shellwave/radial.hpp"
#include "shellwave/shell_field.hpp"

using namespace shellwave;

namespace {

constexpr double kPi = std::numbers::pi;
const SpinorMatrix I4 = SpinorMatrix::Identity();

int g_failed = 0;

void sub(bool pass, const std::string &text) {
  std::printf("    %s  %s\n", pass ? "ok  " : "FAIL", text.c_str());
}

void info(const std::string &text) { std::printf("    info  %s\n", text.c_str()); }

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Runs one criterion body, which returns its verdict; prints the verdict
/// line with the measured wall time checked against the budget.
void criterion(int id, const std::string &title, double budget_s,
               const std::function<bool()> &body) {
  std::printf("[%d] %s\n", id, title.c_str());
  std::fflush(stdout);
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  try {
    pass = body();
  } catch (const std::exception &e) {
    sub(false, std::string("unexpected exception: ") + e.what());
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (budget_s > 0) {
    const bool in_time = dt < budget_s;
    sub(in_time, fmt("runtime %.2f s (budget %.0f s)", dt, budget_s));
    pass = pass && in_time;
  }
  std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", id,
              title.c_str(), dt);
  std::fflush(stdout);
  if (!pass)
    ++g_failed;
}

Vec3 random_unit(std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

bool valid_sample(const CouplingPair &c) {
  const double d = c.d();
  double dist = 1e300;
  for (int k = 0; k < 64; ++k)
    dist = std::min(dist, std::abs(d - (2 * k + 1) * (2 * k + 1) * kPi * kPi));
  return std::abs(d + 4) > 0.1 && std::abs(d - 4) > 0.1 && dist > 0.1;
}

/// Closed-form renormalization used as an oracle: lambda = tanh(x)/x with
/// x = sqrt(-d)/2, or tan(y)/y with y = sqrt(d)/2.
CouplingPair renormalize_oracle(const CouplingPair &c) {
  const double d = c.d();
  double lam = 1.0;
  if (d < 0) {
    const double x = std::sqrt(-d) / 2;
    lam = std::tanh(x) / x;
  } else if (d > 0) {
    const double y = std::sqrt(d) / 2;
    lam = std::tan(y) / y;
  }
  return {lam * c.eta, lam * c.tau};
}

const std::vector<double> kEps{0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};

// --- 1 ---------------------------------------------------------------------

bool algebra_suite() {
  std::mt19937_64 rng(20241);
  std::uniform_real_distribution<double> u(-3, 3);
  double anti = 0, factor = 0, jump = 0;
  for (int j = 1; j <= 3; ++j) {
    anti += (clifford::alpha(j) * clifford::beta() +
             clifford::beta() * clifford::alpha(j))
                .norm();
    for (int k = 1; k <= 3; ++k)
      anti += (clifford::alpha(j) * clifford::alpha(k) +
               clifford::alpha(k) * clifford::alpha(j) -
               (j == k ? 2.0 : 0.0) * I4)
                  .norm();
  }
  anti += (clifford::beta() * clifford::beta() - I4).norm();

  int n = 0;
  while (n < 1000) {
    CouplingPair c{u(rng), u(rng)};
    const Vec3 nu = random_unit(rng);
    if (!valid_sample(c))
      continue;
    ++n;
    const double d = c.d();
    const SpinorMatrix M = clifford::half_jump(nu, c);
    factor = std::max(factor, ((I4 - M) * (I4 + M) - ((4 + d) / 4) * I4).norm());
    const SpinorMatrix R = clifford::jump_matrix(
        nu, coupling::renormalize(c).as_coupling());
    jump = std::max(jump, (clifford::exp_shell(nu, c) - R).norm());
  }
  const bool ok1 = anti == 0.0, ok2 = factor < 1e-12, ok3 = jump < 1e-10;
  sub(ok1, fmt("anticommutation relations exact (sum of norms %.1e)", anti));
  sub(ok2, fmt("max ||(I-M)(I+M) - (4+d)/4 I|| = %.2e < 1e-12", factor));
  sub(ok3, fmt("max ||exp_shell - jump_matrix(renormalize)|| = %.2e < 1e-10",
               jump));
  return ok1 && ok2 && ok3;
}

// --- 2 ---------------------------------------------------------------------

bool trace_compatibility() {
  std::mt19937_64 rng(20242);
  std::uniform_real_distribution<double> u(-3, 3), eps_dist(0.01, 0.45);
  const std::vector<mollifier::Profile> profiles{
      mollifier::box(), mollifier::triangle(), mollifier::asymmetric_linear()};
  auto sphere = geometry::make_surface("sphere", {1.0});
  double worst = 0;
  int n = 0;
  while (n < 200) {
    CouplingPair c{u(rng), u(rng)};
    if (!valid_sample(c))
      continue;
    const Vec3 nu = random_unit(rng);
    shell_field::TwistField U(sphere, c, profiles[n % 3], eps_dist(rng));
    ++n;
    const auto t = shell_field::twist_traces(U, nu);
    // The renormalized jump comes from the closed-form oracle.
    const SpinorMatrix R = clifford::jump_matrix(nu, renormalize_oracle(c));
    worst = std::max(worst, (t.plus * R - t.minus).norm());
  }
  const bool ok = worst < 1e-10;
  sub(ok, fmt("max ||U(x+) R_hat - U(x-)|| = %.2e < 1e-10 over 200 samples",
              worst));
  return ok;
}

// --- 3 ---------------------------------------------------------------------

bool gradient_cancellation() {
  std::mt19937_64 rng(20243);
  std::uniform_real_distribution<double> u(-2, 2), th(0.3, kPi - 0.3),
      ph(-kPi, kPi), mag(0.05, 0.9), sign(-1, 1);
  std::normal_distribution<double> g;
  auto surf = geometry::make_surface("ellipsoid", {1, 1.2, 2});
  const double eps = 0.1;
  double resid = 0, fd_rel = 0;
  for (int i = 0; i < 100; ++i) {
    CouplingPair c{u(rng), u(rng)};
    shell_field::TwistField U(surf, c, mollifier::raised_cosine(), eps);
    shell_field::PotentialField V(surf, c, mollifier::raised_cosine(), eps);
    const double p = eps * mag(rng) * (sign(rng) < 0 ? -1 : 1);
    const Vec3 x = geometry::tubular_map(*surf, 0, Vec2(th(rng), ph(rng)), p);
    Spinor w;
    for (int k = 0; k < 4; ++k)
      w(k) = Complex(g(rng), g(rng));
    w.normalize();

    const auto grad = U.gradient(x);
    Spinor lhs = Spinor::Zero();
    for (int j = 0; j < 3; ++j)
      lhs += Complex(0, -1) * clifford::alpha(j + 1) * grad.component(j) * w;
    const Spinor rhs =
        (-shell_field::potential_at(V, x) * shell_field::twist_at(U, x) +
         grad.R) *
        w;
    resid = std::max(resid, (lhs - rhs).norm());

    const double h = 1e-5;
    for (int j = 0; j < 3; ++j) {
      Vec3 e = Vec3::Zero();
      e(j) = h;
      const SpinorMatrix fd =
          (shell_field::twist_at(U, x + e) - shell_field::twist_at(U, x - e)) /
          (2 * h);
      const SpinorMatrix an = shell_field::twist_gradient(U, x, j);
      fd_rel = std::max(fd_rel, (fd - an).norm() / std::max(an.norm(), 1.0));
    }
  }
  const bool ok1 = resid < 1e-7, ok2 = fd_rel < 1e-5;
  sub(ok1, fmt("max |-i sum alpha_j d_jU u - (-V U + R) u| = %.2e < 1e-7",
               resid));
  sub(ok2, fmt("max relative |twist_gradient - central FD| = %.2e < 1e-5",
               fd_rel));
  return ok1 && ok2;
}

// --- 4 ---------------------------------------------------------------------

bool round_trip() {
  std::mt19937_64 rng(20244);
  std::uniform_real_distribution<double> dd(-3.9, 3.9), split(-1.5, 1.5);
  double worst = 0, min_dhat = 1e300;
  int evaluated = 0;
  for (int i = 0; i < 1000; ++i) {
    double dh = dd(rng);
    if (i % 50 == 0)
      dh = (i % 100 == 0 ? 1 : -1) * std::ldexp(1.0, -(i / 50) - 10);
    const double th = split(rng), a = std::sqrt(std::abs(dh));
    coupling::RenormalizedPair target;
    if (dh > 0) {
      target.eta_hat = a * std::cosh(th);
      target.tau_hat = a * std::sinh(th);
    } else {
      target.eta_hat = a * std::sinh(th);
      target.tau_hat = a * std::cosh(th);
    }
    const auto back =
        coupling::renormalize(coupling::inverse_renormalize(target));
    worst = std::max({worst, std::abs(back.eta_hat - target.eta_hat),
                      std::abs(back.tau_hat - target.tau_hat)});
    min_dhat = std::min(min_dhat, back.d_hat());
    ++evaluated;
  }
  const bool ok1 = worst < 1e-10;
  sub(ok1, fmt("1000 targets d_hat in (-3.9, 3.9) (incl. |d_hat| down to "
               "2^-29): max componentwise error %.2e < 1e-10",
               worst));

  // Forward map on |eta|, |tau| <= 10, including the d = -4 plane and the
  // strongly negative end d = -100.
  std::uniform_real_distribution<double> wide(-10, 10);
  for (int i = 0; i < 20000; ++i) {
    CouplingPair c{wide(rng), wide(rng)};
    if (i % 4 == 0)
      c.tau = std::copysign(std::sqrt(c.eta * c.eta + 4.0), c.tau);
    try {
      min_dhat = std::min(min_dhat, coupling::renormalize(c).d_hat());
      ++evaluated;
    } catch (const ExcludedInput &) {
    }
  }
  const bool ok2 = min_dhat > -4;
  sub(ok2, fmt("d_hat > -4 over %d forward evaluations (min d_hat + 4 = "
               "%.3e)",
               evaluated, min_dhat + 4));

  // Beyond sqrt(-d)/2 ~ 18, tanh^2 rounds to 1 and d_hat to exactly -4.
  double far = coupling::renormalize({0, 80}).d_hat();
  info(fmt("d = -6400: d_hat + 4 = %.3e in double precision (tanh saturated; "
           "classified as %s)",
           far + 4,
           std::string(coupling::to_string(coupling::classify({0, 80}).tag))
               .c_str()));
  return ok1 && ok2;
}

// --- 5 ---------------------------------------------------------------------

struct SweepVerdict {
  bool decreasing = false, extrapolated = false, separated = false;
};

SweepVerdict convergence_protocol(const CouplingPair &c, bool gating,
                                  bool check_separation) {
  const radial::Channel ch{-1, 1.0, 1.0};
  const auto recs =
      convergence::eigenvalue_sweep(ch, c, kEps, mollifier::box());
  const double ref = recs.front().ref_renormalized;
  std::vector<double> e, diff;
  for (const auto &r : recs) {
    e.push_back(r.energy);
    diff.push_back(std::abs(r.energy - ref));
  }
  SweepVerdict v;
  v.decreasing = std::adjacent_find(diff.begin(), diff.end(),
                                    std::less_equal<double>()) == diff.end();
  const double lim = convergence::richardson_extrapolate(kEps, e, 2);
  v.extrapolated = std::abs(lim - ref) < 1e-5;
  auto out = [&](bool ok, const std::string &s) {
    if (gating)
      sub(ok, s);
    else
      info(std::string(ok ? "ok    " : "no    ") + s);
  };
  out(v.decreasing,
      fmt("|E_eps - E_hat| strictly decreasing: %.3e ... %.3e", diff.front(),
          diff.back()));
  out(v.extrapolated, fmt("Richardson limit %.10f vs E_hat %.10f (err %.2e)",
                          lim, ref, lim - ref));
  if (check_separation) {
    const auto naive = recs.front().ref_naive;
    v.separated = naive && std::abs(*naive - ref) >= 10 * diff.back();
    out(v.separated,
        naive ? fmt("|E_naive - E_hat| = %.4f >= 10 x %.4e", std::abs(*naive - ref),
                    diff.back())
              : std::string("naive reference unavailable"));
  } else {
    v.separated = true;
  }
  return v;
}

/// Reports why a coupling has no reference eigenvalue: scans all channels.
void report_no_eigenpair(const CouplingPair &c) {
  const auto ch_hat = coupling::renormalize(c).as_coupling();
  int found = 0;
  for (int kappa = -radial::kMaxKappa; kappa <= radial::kMaxKappa; ++kappa) {
    if (kappa == 0)
      continue;
    const radial::Channel ch{kappa, 1.0, 1.0};
    found += static_cast<int>(
        radial::delta_eigenvalues(ch, ch_hat, radial::full_gap(ch)).size());
  }
  info(fmt("renormalized shell (%.6f, %.6f): %d gap eigenvalues over "
           "kappa = -10..10",
           ch_hat.eta, ch_hat.tau, found));
}

bool eigenvalue_convergence() {
  bool pass = true;
  std::printf("    c = (1.5, 0):\n");
  {
    auto v = convergence_protocol({1.5, 0}, true, true);
    pass = pass && v.decreasing && v.extrapolated && v.separated;
  }
  for (CouplingPair c : {CouplingPair{0, 2}, CouplingPair{1, 1}}) {
    std::printf("    c = (%g, %g):\n", c.eta, c.tau);
    try {
      auto v = convergence_protocol(c, true, c.d() != 0);
      pass = pass && v.decreasing && v.extrapolated && v.separated;
    } catch (const NoEigenpair &e) {
      sub(false, std::string("no reference eigenpair: ") + e.what());
      report_no_eigenpair(c);
      pass = false;
    }
  }
  // Same protocol on the mirrored couplings, which do bind.
  for (CouplingPair c : {CouplingPair{0, -2}, CouplingPair{-1, -1}}) {
    std::printf("    supplementary c = (%g, %g):\n", c.eta, c.tau);
    try {
      convergence_protocol(c, false, false);
    } catch (const Error &e) {
      info(e.what());
    }
  }
  return pass;
}

// --- 6 ---------------------------------------------------------------------

/// ||psi||^2 by composite Simpson, split at R0; independent of the solver's
/// Gauss rule.
double norm2(const radial::RadialEigenfunction &psi) {
  const double R0 = psi.channel().R0, T = psi.tail_radius();
  auto simpson = [&](double a, double b, int n) {
    double s = 0, h = (b - a) / n;
    for (int k = 0; k <= n; ++k) {
      const double r = a + k * h;
      const Vec2 y = psi(r == R0 ? R0 - 1e-15 : r);
      s += (k == 0 || k == n ? 1 : (k % 2 ? 4 : 2)) * y.squaredNorm();
    }
    return s * h / 3;
  };
  return simpson(1e-12, R0 - 1e-13, 20000) + simpson(R0, T, 40000);
}

bool graph_limit() {
  const radial::Channel ch{-1, 1.0, 1.0};
  const CouplingPair c{1.5, 0};
  const auto recs =
      convergence::graph_limit_run(ch, c, kEps, mollifier::box());
  const double E = recs.front().energy;
  const auto psi = radial::RadialEigenfunction::delta(
      ch, coupling::renormalize(c).as_coupling(), E);
  const double pn = std::sqrt(norm2(psi));
  std::vector<double> a, b;
  for (const auto &r : recs) {
    a.push_back(*r.a);
    b.push_back(*r.b);
    info(fmt("eps = %-9g a = %.6e  b = %.6e", r.eps, *r.a, *r.b));
  }
  auto strictly_down = [](const std::vector<double> &v) {
    return std::adjacent_find(v.begin(), v.end(), std::less_equal<double>()) ==
           v.end();
  };
  const bool mono = strictly_down(a) && strictly_down(b);
  const bool a_ok = a.back() < 1e-2 * pn;
  const bool b_ok = b.back() < 5e-2 * std::abs(E) * pn;
  const double slope = convergence::rate_fit(kEps, a).slope;
  const bool s_ok = slope >= 0.4 && slope <= 0.6;
  sub(mono, "a_eps and b_eps decrease monotonically along eps-halving");
  sub(a_ok, fmt("final a_eps = %.4e < 1e-2 ||psi|| = %.4e", a.back(),
                1e-2 * pn));
  sub(b_ok, fmt("final b_eps = %.4e < 5e-2 ||E psi|| = %.4e", b.back(),
                5e-2 * std::abs(E) * pn));
  sub(s_ok, fmt("slope of log a_eps vs log eps = %.4f in [0.4, 0.6]", slope));
  return mono && a_ok && b_ok && s_ok;
}

// --- 7 ---------------------------------------------------------------------

bool geometry_suite() {
  using namespace geometry;
  std::mt19937_64 rng(20247);
  std::uniform_real_distribution<double> th(0.2, kPi - 0.2), ph(-kPi, kPi),
      unit(-1, 1);
  double wein = 0, round = 0, grad = 0;
  for (double R : {0.5, 1.0, 3.0}) {
    auto sph = make_surface("sphere", {R});
    for (int i = 0; i < 100; ++i) {
      const Vec2 s(th(rng), ph(rng));
      const auto w = weingarten(*sph, 0, s);
      wein = std::max(wein, (w.matrix + Mat2::Identity() / R).norm());
      // Closed-form projection oracle for the sphere.
      const Vec3 x = random_unit(rng) * R * (1 + 0.45 * unit(rng));
      const auto tp = project(*sph, x);
      round = std::max({round, std::abs(tp.p - (x.norm() - R)),
                        (sph->point(tp.chart, tp.s) - R * x.normalized()).norm()});
    }
  }
  for (const auto &surf :
       {make_surface("sphere", {1.3}), make_surface("ellipsoid", {1, 1.2, 2})}) {
    const double gamma = surf->tube_width();
    for (int i = 0; i < 100; ++i) {
      const Vec2 s(th(rng), ph(rng));
      const double p = 0.9 * gamma * unit(rng);
      const Vec3 x = tubular_map(*surf, 0, s, p);
      const auto tp = project(*surf, x);
      round = std::max({round, std::abs(tp.p - p),
                        (surf->point(tp.chart, tp.s) - surf->point(0, s)).norm()});
      const auto g = projection_gradient(*surf, tp);
      const double h = 1e-6;
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e(j) = h;
        const auto a = project(*surf, x + e), b = project(*surf, x - e);
        if (a.chart != tp.chart || b.chart != tp.chart)
          continue;
        Vec2 ds = a.s - b.s;
        ds(1) = std::remainder(ds(1), 2 * kPi);
        grad = std::max({grad, (ds / (2 * h) - g.chart.col(j)).norm(),
                         std::abs((a.p - b.p) / (2 * h) - g.normal(j))});
      }
    }
  }
  const bool ok1 = wein < 1e-12, ok2 = round < 1e-10, ok3 = grad < 1e-6;
  sub(ok1, fmt("sphere Weingarten map vs -I/R: %.2e < 1e-12", wein));
  sub(ok2, fmt("projection round trip: %.2e < 1e-10", round));
  sub(ok3, fmt("grad P vs finite differences (sphere, ellipsoid): %.2e < 1e-6",
               grad));
  return ok1 && ok2 && ok3;
}

// --- 8 ---------------------------------------------------------------------

bool profile_independence() {
  const radial::Channel ch{-1, 1.0, 1.0};
  const CouplingPair c{1.5, 0};
  std::vector<double> limits;
  double ref = 0;
  for (const char *name : {"box", "triangle", "cosine"}) {
    const auto recs =
        convergence::eigenvalue_sweep(ch, c, kEps, mollifier::by_name(name));
    std::vector<double> e;
    for (const auto &r : recs)
      e.push_back(r.energy);
    ref = recs.front().ref_renormalized;
    limits.push_back(convergence::richardson_extrapolate(kEps, e, 2));
    info(fmt("%-8s raw E(eps_min) = %.10f  extrapolated = %.10f", name,
             e.back(), limits.back()));
  }
  const auto [lo, hi] = std::minmax_element(limits.begin(), limits.end());
  const bool ok = *hi - *lo < 1e-4;
  sub(ok, fmt("spread of extrapolated limits %.2e < 1e-4 (E_hat = %.10f)",
              *hi - *lo, ref));
  return ok;
}

// --- 9 ---------------------------------------------------------------------

template <class Ex, class F> bool throws(F &&f) {
  try {
    f();
  } catch (const Ex &) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

bool error_paths() {
  const bool e1 =
      throws<ConfinementCase>([] { radial::radial_jump({0, 2}, false); }) &&
      throws<ConfinementCase>(
          [] { clifford::jump_matrix(Vec3(0, 0, 1), {0, 2}); });
  const bool e2 = throws<ExcludedInput>([] { coupling::renormalize({kPi, 0}); });
  const bool e3 =
      throws<NoPreimage>([] { coupling::inverse_renormalize({0, 2}); }) &&
      throws<NoPreimage>([] { coupling::inverse_renormalize({1, 3}); });
  sub(e1, "(0,2) bare jump -> ConfinementCase");
  sub(e2, "(pi,0) -> ExcludedInput");
  sub(e3, "inverse at d_hat <= -4 -> NoPreimage");

  const radial::Channel ch{-1, 1.0, 1.0};
  const std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  const convergence::OutputMeta meta{"0123456789abcdef", "{}"};
  convergence::SweepOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const auto r1 = convergence::eigenvalue_sweep(ch, {1.5, 0}, eps,
                                                mollifier::box(), one);
  const auto r2 = convergence::eigenvalue_sweep(ch, {1.5, 0}, eps,
                                                mollifier::box(), many);
  const std::string csv1 = convergence::format_csv(r1, meta),
                    csv2 = convergence::format_csv(r2, meta);
  const bool e4 = csv1 == csv2 && !csv1.empty();
  sub(e4, fmt("CSV byte-identical across repeated runs (%zu bytes)",
              csv1.size()));
  return e1 && e2 && e3 && e4;
}

} // namespace

int main() {
  std::printf("shellwave acceptance suite\n");
  criterion(1, "algebra suite", 1.0, algebra_suite);
  criterion(2, "trace compatibility", 1.0, trace_compatibility);
  criterion(3, "gradient cancellation", 5.0, gradient_cancellation);
  criterion(4, "coupling round trip", 0, round_trip);
  criterion(5, "eigenvalue convergence", 60.0, eigenvalue_convergence);
  criterion(6, "graph-limit norms", 30.0, graph_limit);
  criterion(7, "geometry suite", 5.0, geometry_suite);
  criterion(8, "profile independence", 0, profile_independence);
  criterion(9, "error paths and reproducible CSV", 0, error_paths);
  std::printf("%d of 9 criteria failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
