#include "shellwave/bessel.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "shellwave/errors.hpp"

namespace shellwave::radial {

namespace {

void check_args(int l, double x) {
  if (l < 0 || l > kMaxBesselOrder)
    throw InvalidArgument("bessel: order must lie in [0, 40]");
  if (!(x > 0) || !std::isfinite(x))
    throw InvalidArgument("bessel: argument must be positive and finite");
}

// e^{-x} sinh(x)/x without cancellation.
double i0_scaled(double x) {
  if (x < 1e-3) {
    double x2 = x * x;
    return std::exp(-x) * (1 + x2 / 6 * (1 + x2 / 20 * (1 + x2 / 42)));
  }
  return -std::expm1(-2 * x) / (2 * x);
}

// Scaled i_0 .. i_{n} by Miller's backward recurrence, normalized on i_0.
std::vector<double> i_scaled_upto(int n, double x) {
  int start = n + 30 + static_cast<int>(std::ceil(std::sqrt(80.0 * x)));
  std::vector<double> v(start + 2, 0.0);
  v[start + 1] = 0.0;
  v[start] = 1e-300;
  for (int k = start; k >= 1; --k) {
    v[k - 1] = v[k + 1] + (2.0 * k + 1.0) / x * v[k];
    if (std::abs(v[k - 1]) > 1e250) {
      for (int j = k - 1; j <= start + 1; ++j)
        v[j] *= 1e-250;
    }
  }
  const double norm = i0_scaled(x) / v[0];
  std::vector<double> out(n + 1);
  for (int k = 0; k <= n; ++k)
    out[k] = v[k] * norm;
  return out;
}

// Scaled k_0 .. k_{n}; forward recurrence is stable for k.
std::vector<double> k_scaled_upto(int n, double x) {
  std::vector<double> out(n + 1);
  out[0] = 1.0 / x;
  if (n >= 1)
    out[1] = (1.0 + 1.0 / x) / x;
  for (int k = 1; k < n; ++k)
    out[k + 1] = out[k - 1] + (2.0 * k + 1.0) / x * out[k];
  return out;
}

} // namespace

BesselValues bessel_pair_scaled(int l, double x) {
  check_args(l, x);
  auto iv = i_scaled_upto(l + 1, x);
  auto kv = k_scaled_upto(l + 1, x);
  // i_l' = i_{l+1} + (l/x) i_l,  k_l' = -k_{l+1} + (l/x) k_l
  return {iv[l], kv[l], iv[l + 1] + l / x * iv[l],
          -kv[l + 1] + l / x * kv[l]};
}

BesselValues bessel_pair(int l, double x) {
  check_args(l, x);
  if (x > kMaxBesselArg)
    throw Overflow("bessel: argument " + std::to_string(x) +
                   " exceeds 700; use bessel_pair_scaled");
  BesselValues s = bessel_pair_scaled(l, x);
  const double ep = std::exp(x), em = std::exp(-x);
  return {s.i * ep, s.k * em, s.di * ep, s.dk * em};
}

} // namespace shellwave::radial
