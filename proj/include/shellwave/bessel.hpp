#pragma once

/// Modified spherical Bessel functions.
///
/// Convention: i_l(x) = sqrt(pi/(2x)) I_{l+1/2}(x) and
/// k_l(x) = sqrt(2/(pi x)) K_{l+1/2}(x), so that
///   i_0(x) = sinh(x)/x,  k_0(x) = e^{-x}/x,
/// and the Wronskian is i_l k_l' - i_l' k_l = -1/x^2 for every l.
/// Everything else in the library goes through these functions.
namespace shellwave::radial {

inline constexpr int kMaxBesselOrder = 40;
inline constexpr double kMaxBesselArg = 700.0;

struct BesselValues {
  double i;
  double k;
  double di; ///< d i_l / dx
  double dk; ///< d k_l / dx
};

/// Throws InvalidArgument for x <= 0 or l outside [0, 40], Overflow for
/// x > 700.
BesselValues bessel_pair(int l, double x);

/// Same quantities with i, di multiplied by e^{-x} and k, dk by e^{x};
/// valid for any x > 0.
BesselValues bessel_pair_scaled(int l, double x);

} // namespace shellwave::radial
