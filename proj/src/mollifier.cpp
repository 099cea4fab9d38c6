#include "shellwave/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shellwave/errors.hpp"
#include "shellwave/quadrature.hpp"

namespace shellwave::mollifier {

Profile::Profile(std::string name, Fn h, std::vector<double> breakpoints,
                 double sup_bound, Fn cdf)
    : name_(std::move(name)), h_(std::move(h)), cdf_(std::move(cdf)),
      breakpoints_(std::move(breakpoints)), sup_(sup_bound) {
  if (breakpoints_.size() < 2 || breakpoints_.front() != -1.0 ||
      breakpoints_.back() != 1.0 ||
      !std::is_sorted(breakpoints_.begin(), breakpoints_.end()))
    throw InvalidArgument("Profile: breakpoints must be sorted and span "
                          "[-1, 1]");
}

double Profile::cdf(double t) const {
  t = std::clamp(t, -1.0, 1.0);
  if (cdf_)
    return cdf_(t);
  return cdf_quadrature(t);
}

double Profile::cdf_quadrature(double t, double tol) const {
  t = std::clamp(t, -1.0, 1.0);
  std::vector<double> pts;
  for (double b : breakpoints_) {
    if (b < t)
      pts.push_back(b);
  }
  pts.push_back(t);
  return quadrature::adaptive_simpson_piecewise(h_, pts, tol);
}

double Profile::inside(double t, double lo, double hi) const {
  if (t <= lo)
    t = std::nextafter(lo, hi);
  else if (t >= hi)
    t = std::nextafter(hi, lo);
  return h_(t);
}

namespace {
bool in_support(double t) { return t > -1.0 && t < 1.0; }
} // namespace

Profile box() {
  return Profile(
      "box", [](double t) { return in_support(t) ? 0.5 : 0.0; }, {-1.0, 1.0},
      0.5, [](double t) { return 0.5 * (t + 1.0); });
}

Profile triangle() {
  return Profile(
      "triangle",
      [](double t) { return in_support(t) ? 1.0 - std::abs(t) : 0.0; },
      {-1.0, 0.0, 1.0}, 1.0,
      [](double t) {
        return t <= 0.0 ? 0.5 * (1.0 + t) * (1.0 + t)
                        : 1.0 - 0.5 * (1.0 - t) * (1.0 - t);
      });
}

Profile raised_cosine() {
  using std::numbers::pi;
  return Profile(
      "cosine",
      [](double t) {
        return in_support(t) ? 0.5 * (1.0 + std::cos(pi * t)) : 0.0;
      },
      {-1.0, 1.0}, 1.0,
      [](double t) { return 0.5 * (t + 1.0) + std::sin(pi * t) / (2.0 * pi); });
}

Profile asymmetric_linear() {
  return Profile(
      "asymmetric",
      [](double t) { return in_support(t) ? 0.5 * (1.0 + t) : 0.0; },
      {-1.0, 1.0}, 1.0, [](double t) { return 0.25 * (1.0 + t) * (1.0 + t); });
}

Profile by_name(std::string_view name) {
  if (name == "box")
    return box();
  if (name == "triangle")
    return triangle();
  if (name == "cosine")
    return raised_cosine();
  if (name == "asymmetric")
    return asymmetric_linear();
  throw InvalidArgument("unknown profile '" + std::string(name) + "'");
}

std::vector<std::string> shipped_names() {
  return {"box", "triangle", "cosine", "asymmetric"};
}

ScaledProfile::ScaledProfile(Profile profile, double eps)
    : profile_(std::move(profile)), eps_(eps) {
  if (!(eps > 0.0))
    throw InvalidArgument("scaled_profile: eps must be positive");
}

double ScaledProfile::operator()(double p) const {
  return profile_(p / eps_) / eps_;
}

ScaledProfile scaled_profile(const Profile &profile, double eps) {
  return ScaledProfile(profile, eps);
}

Primitive::Primitive(Profile profile, double eps)
    : profile_(std::move(profile)), eps_(eps) {
  if (!(eps > 0.0))
    throw InvalidArgument("primitive: eps must be positive");
  // Half-line masses by quadrature; they define the traces of the twist.
  const double left = profile_.cdf_quadrature(0.0);
  total_ = profile_.cdf_quadrature(1.0);
  minus_ = -left;
  plus_ = total_ - left;
}

double Primitive::operator()(double p) const {
  if (p == 0.0)
    throw EvaluationAtZero("H_eps is not defined at p = 0; choose a side");
  const double t = p / eps_;
  if (std::abs(t) >= 1.0)
    return 0.0;
  if (p > 0.0)
    return total_ - profile_.cdf(t);
  return -profile_.cdf(t);
}

Primitive primitive(const Profile &profile, double eps) {
  return Primitive(profile, eps);
}

ProfileReport validate_profile(const Profile &profile) {
  ProfileReport report;
  constexpr int kSamples = 8001;
  bool finite = true;
  for (int i = 0; i < kSamples; ++i) {
    const double t = -2.0 + 4.0 * i / (kSamples - 1);
    const double v = profile(t);
    if (!std::isfinite(v)) {
      finite = false;
      continue;
    }
    report.sup_sample = std::max(report.sup_sample, std::abs(v));
    if (!(t > -1.0 && t < 1.0))
      report.max_outside = std::max(report.max_outside, std::abs(v));
  }
  report.bounded = finite;
  report.support_ok = report.max_outside == 0.0;
  report.mass = profile.mass();
  report.unit_mass = std::abs(report.mass - 1.0) < kMassTol;
  return report;
}

} // namespace shellwave::mollifier
