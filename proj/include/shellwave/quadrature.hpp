#pragma once

#include <functional>
#include <span>
#include <vector>

namespace shellwave::quadrature {

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)> &f, double a,
                        double b, double tol = 1e-12, int max_depth = 50);

/// Sum of adaptive Simpson over consecutive breakpoints, so integrands that
/// are only piecewise smooth are split at their kinks/jumps.
double adaptive_simpson_piecewise(const std::function<double(double)> &f,
                                  std::span<const double> breakpoints,
                                  double tol = 1e-12);

struct GaussLegendre {
  std::vector<double> nodes;   ///< on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton on P_n, machine accuracy).
GaussLegendre gauss_legendre(int n);

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
double composite_gauss(const std::function<double(double)> &f, double a,
                       double b, int panels, const GaussLegendre &rule);

} // namespace shellwave::quadrature
