#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "shellwave/quadrature.hpp"

using namespace shellwave::quadrature;

TEST_CASE("adaptive Simpson on smooth and kinked integrands") {
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0, 1) ==
        doctest::Approx(std::exp(1.0) - 1).epsilon(1e-13));
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0,
                         std::numbers::pi) ==
        doctest::Approx(2.0).epsilon(1e-13));
  std::vector<double> bp{-1, 0, 1};
  CHECK(adaptive_simpson_piecewise([](double x) { return 1 - std::abs(x); },
                                   bp) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Gauss-Legendre") {
  for (int n : {1, 2, 5, 16, 40}) {
    auto g = gauss_legendre(n);
    double wsum = 0;
    for (double w : g.weights)
      wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // Exact for degree 2n-1.
    int deg = 2 * n - 1;
    double s = 0;
    for (int i = 0; i < n; ++i)
      s += g.weights[i] * std::pow(g.nodes[i], deg - (deg % 2));
    double want = 2.0 / (deg - (deg % 2) + 1);
    CHECK(s == doctest::Approx(want).epsilon(1e-13));
  }
  auto g = gauss_legendre(16);
  CHECK(composite_gauss([](double x) { return std::cos(x); }, 0, 2, 4, g) ==
        doctest::Approx(std::sin(2.0)).epsilon(1e-15));
}
