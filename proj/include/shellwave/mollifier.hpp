#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

/// Mollifier profiles h on (-1, 1), the squeezed family h_eps(p) =
/// h(p/eps)/eps and the one-sided primitive H_eps used by the twist field.
namespace shellwave::mollifier {

class Profile {
public:
  using Fn = std::function<double(double)>;

  /// `h` is evaluated as given (no support clipping) so validate_profile can
  /// catch bad profiles. `breakpoints` must start at -1, end at 1 and list
  /// every kink or jump in between. `cdf`, when supplied, is the closed form
  /// of t -> int_{-1}^t h.
  Profile(std::string name, Fn h, std::vector<double> breakpoints,
          double sup_bound, Fn cdf = {});

  const std::string &name() const { return name_; }
  double operator()(double t) const { return h_(t); }
  double sup() const { return sup_; }
  std::span<const double> breakpoints() const { return breakpoints_; }

  /// int_{-1}^t h (clamped to [-1, 1]); closed form when available.
  double cdf(double t) const;
  /// Same integral, always by adaptive Simpson split at the breakpoints.
  double cdf_quadrature(double t, double tol = 1e-13) const;
  double mass() const { return cdf_quadrature(1.0); }

  /// h at t, taking the one-sided limit from inside [lo, hi] when t sits on
  /// an endpoint of that interval (needed at jump points of the profile).
  double inside(double t, double lo, double hi) const;

private:
  std::string name_;
  Fn h_;
  Fn cdf_;
  std::vector<double> breakpoints_;
  double sup_;
};

/// h = 1/2 on (-1, 1).
Profile box();
/// h = 1 - |t|.
Profile triangle();
/// h = (1 + cos(pi t)) / 2.
Profile raised_cosine();
/// h = (1 + t) / 2, all mass biased to the outer side.
Profile asymmetric_linear();

/// "box", "triangle", "cosine" or "asymmetric". Throws InvalidArgument.
Profile by_name(std::string_view name);
std::vector<std::string> shipped_names();

/// p -> h_eps(p).
class ScaledProfile {
public:
  ScaledProfile(Profile profile, double eps);
  double operator()(double p) const;
  double eps() const { return eps_; }
  const Profile &profile() const { return profile_; }

private:
  Profile profile_;
  double eps_;
};

ScaledProfile scaled_profile(const Profile &profile, double eps);

/// H_eps(p) = int_p^eps h_eps for 0 < p < eps, -int_{-eps}^p h_eps for
/// -eps < p < 0, zero for |p| >= eps. Undefined at p = 0.
class Primitive {
public:
  Primitive(Profile profile, double eps);

  /// Throws EvaluationAtZero for p == 0.
  double operator()(double p) const;
  /// H_eps(0+) = int_0^eps h_eps.
  double limit_plus() const { return plus_; }
  /// H_eps(0-) = -int_{-eps}^0 h_eps.
  double limit_minus() const { return minus_; }
  double eps() const { return eps_; }
  const Profile &profile() const { return profile_; }

private:
  Profile profile_;
  double eps_;
  double plus_;
  double minus_;
  double total_;
};

Primitive primitive(const Profile &profile, double eps);

struct ProfileReport {
  bool bounded = false;
  bool support_ok = false;
  bool unit_mass = false;
  double sup_sample = 0.0;  ///< max |h| over the sample grid
  double max_outside = 0.0; ///< max |h| sampled at |t| >= 1
  double mass = 0.0;

  bool pass() const { return bounded && support_ok && unit_mass; }
};

/// Mass is accepted within this absolute tolerance.
inline constexpr double kMassTol = 1e-11;

ProfileReport validate_profile(const Profile &profile);

} // namespace shellwave::mollifier
