#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "shellwave/types.hpp"

/// Closed smooth surfaces given by a finite atlas of charts, with the
/// tubular coordinates x = phi(s) + p nu(phi(s)) around them.
///
/// Sign convention: nu is the outward normal and the Weingarten map is
/// W[d_i phi] = -d_i nu. With this convention d_s Phi = (I - p W) d_s phi
/// exactly, and a sphere of radius R has W = -I/R (principal curvatures
/// -1/R).
namespace shellwave::geometry {

struct ChartDomain {
  Vec2 lo;
  Vec2 hi;
  bool periodic_second = false; ///< s_2 wraps with period hi - lo
};

struct Tangents {
  Vec3 d1;
  Vec3 d2;
};

struct SecondDerivatives {
  Vec3 d11;
  Vec3 d12;
  Vec3 d22;
};

struct WeingartenData {
  Mat2 matrix; ///< in the (d_1 phi, d_2 phi) basis
  double k1;   ///< principal curvatures, k1 <= k2
  double k2;
};

struct TubularPoint {
  Vec2 s;
  double p = 0.0;
  int chart = 0;
};

/// Rows of the 2x3 Jacobian of s = P_phi(x) and the gradient of p = P_perp(x).
struct ProjectionGradient {
  Eigen::Matrix<double, 2, 3> chart;
  Vec3 normal;
};

class Surface {
public:
  virtual ~Surface() = default;

  virtual std::string kind() const = 0;
  virtual int chart_count() const = 0;
  virtual ChartDomain domain(int chart) const = 0;
  virtual Vec3 point(int chart, const Vec2 &s) const = 0;
  /// Any point of the enclosed domain; fixes the outward orientation.
  virtual Vec3 interior_point() const = 0;

  /// Defaults use central finite differences of point().
  virtual Tangents tangents(int chart, const Vec2 &s) const;
  virtual SecondDerivatives second_derivatives(int chart,
                                               const Vec2 &s) const;
  /// Outward unit normal. Throws DegenerateChart where d1 x d2 vanishes.
  virtual Vec3 normal(int chart, const Vec2 &s) const;
  /// Default: central differences of normal() with step kWeingartenStep.
  virtual WeingartenData weingarten(int chart, const Vec2 &s) const;
  /// Chart whose coordinates are well conditioned near x. Default picks the
  /// chart holding the closest coarse-grid sample.
  virtual int preferred_chart(const Vec3 &x) const;

  /// gamma = 0.5 / max |k|, computed once on first use.
  double tube_width() const;

  static constexpr double kWeingartenStep = 1e-5;

private:
  mutable std::once_flag width_once_;
  mutable double width_ = 0.0;
};

/// Axis-aligned ellipsoid x^2/a^2 + y^2/b^2 + z^2/c^2 = 1 with two
/// spherical-angle charts whose poles lie on the z axis (chart 0) and on the
/// x axis (chart 1). Analytic derivatives and normal; finite-difference
/// Weingarten map.
class Ellipsoid : public Surface {
public:
  Ellipsoid(double a, double b, double c);

  std::string kind() const override { return "ellipsoid"; }
  int chart_count() const override { return 2; }
  ChartDomain domain(int chart) const override;
  Vec3 point(int chart, const Vec2 &s) const override;
  Vec3 interior_point() const override { return Vec3::Zero(); }
  Tangents tangents(int chart, const Vec2 &s) const override;
  SecondDerivatives second_derivatives(int chart,
                                       const Vec2 &s) const override;
  Vec3 normal(int chart, const Vec2 &s) const override;
  int preferred_chart(const Vec3 &x) const override;

  const Vec3 &radii() const { return radii_; }

private:
  Vec3 radii_;
};

/// Sphere of radius R centred at the origin; everything analytic.
class Sphere : public Ellipsoid {
public:
  explicit Sphere(double radius);

  std::string kind() const override { return "sphere"; }
  WeingartenData weingarten(int chart, const Vec2 &s) const override;
  double radius() const { return radius_; }

private:
  double radius_;
};

/// Surface from user-supplied chart maps; all derivatives by finite
/// differences.
class ParametricSurface : public Surface {
public:
  struct Chart {
    std::function<Vec3(const Vec2 &)> map;
    ChartDomain domain;
  };

  ParametricSurface(std::string name, std::vector<Chart> charts,
                    Vec3 interior);

  std::string kind() const override { return name_; }
  int chart_count() const override {
    return static_cast<int>(charts_.size());
  }
  ChartDomain domain(int chart) const override;
  Vec3 point(int chart, const Vec2 &s) const override;
  Vec3 interior_point() const override { return interior_; }

private:
  std::string name_;
  std::vector<Chart> charts_;
  Vec3 interior_;
};

/// Builds "sphere" (radii = {R}) or "ellipsoid" (radii = {a, b, c}).
std::shared_ptr<const Surface> make_surface(const std::string &kind,
                                            const std::vector<double> &radii);

Vec3 normal(const Surface &surface, int chart, const Vec2 &s);
WeingartenData weingarten(const Surface &surface, int chart, const Vec2 &s);

/// Phi(s, p) = phi(s) + p nu(phi(s)). Throws TubeExceeded if |p| >= gamma.
Vec3 tubular_map(const Surface &surface, int chart, const Vec2 &s, double p);

/// Columns (I - p W) d_1 phi, (I - p W) d_2 phi, nu.
Mat3 tubular_jacobian(const Surface &surface, int chart, const Vec2 &s,
                      double p);

struct ProjectOptions {
  int seed_grid = 32;
  int max_iter = 50;
};

/// Nearest-point projection x -> (s, p) by Newton iteration on the
/// stationarity of |x - phi(s)|^2, seeded by a coarse grid search.
/// Throws OutsideTube when |p| >= gamma, NonConvergence when Newton stalls.
TubularPoint project(const Surface &surface, const Vec3 &x,
                     const ProjectOptions &options = {});

/// Like project() but returns nullopt instead of throwing when the point
/// lies at distance >= max_distance (max_distance <= gamma).
std::optional<TubularPoint> try_project(const Surface &surface, const Vec3 &x,
                                        double max_distance,
                                        const ProjectOptions &options = {});

/// grad P_phi = (I - p W)^{-1} G^{-1} T^T and grad P_perp = nu.
ProjectionGradient projection_gradient(const Surface &surface,
                                       const TubularPoint &tp);

/// 0.5 / max |k_i| over a 64 x 64 sample grid on every chart.
double max_tube_width(const Surface &surface);

} // namespace shellwave::geometry
