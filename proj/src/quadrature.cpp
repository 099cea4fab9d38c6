#include "shellwave/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "shellwave/errors.hpp"

namespace shellwave::quadrature {

namespace {

double simpson_step(const std::function<double(double)> &f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)> &f, double a,
                        double b, double tol, int max_depth) {
  if (a == b)
    return 0.0;
  // Start from four panels so a single coarse Simpson estimate cannot hide
  // structure between its three samples.
  constexpr int kPanels = 4;
  const double width = (b - a) / kPanels;
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == kPanels ? b : lo + width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
    total += simpson_step(f, lo, hi, flo, fm, fhi, whole, tol / kPanels,
                          max_depth);
  }
  return total;
}

double adaptive_simpson_piecewise(const std::function<double(double)> &f,
                                  std::span<const double> breakpoints,
                                  double tol) {
  double total = 0.0;
  const auto pieces = breakpoints.size() > 1 ? breakpoints.size() - 1 : 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
    total += adaptive_simpson(f, breakpoints[i], breakpoints[i + 1],
                              tol / static_cast<double>(pieces));
  return total;
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1)
    throw InvalidArgument("gauss_legendre: n must be positive");
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double composite_gauss(const std::function<double(double)> &f, double a,
                       double b, int panels, const GaussLegendre &rule) {
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double half = 0.5 * width;
    const double mid = lo + half;
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      s += rule.weights[k] * f(mid + half * rule.nodes[k]);
    total += half * s;
  }
  return total;
}

} // namespace shellwave::quadrature
