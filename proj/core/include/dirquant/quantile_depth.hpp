#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dirquant/distributions.hpp"
#include "dirquant/estimation.hpp"
#include "dirquant/sample.hpp"
#include "dirquant/sphere_geometry.hpp"

namespace dirquant {

enum class ContourKind { kCircular, kElliptical };

/// A projection quantile together with the contour it defines.
///
/// For the elliptical kind `c` is the quantile of the transformed
/// projections G(y) . mu_hat and minor_c / major_c are the extreme values of
/// x . mu_hat over the elliptical contour (minor_c >= major_c). For the
/// circular kind both equal `c`.
struct QuantileSummary {
  double tau;
  double c;
  ContourKind kind;
  std::optional<double> minor_c;
  std::optional<double> major_c;
  UnitVector mu;
  std::optional<MahalanobisTransform> transform;
};

struct ContourPolyline {
  double tau;  // NaN when the contour was built from a level alone
  ContourKind kind;
  std::vector<UnitVector> points;
};

// Contour in any dimension: the image under Exp_base of the tangent ellipsoid
// { shape * v : |v| = radius }.
struct ContourGenerator {
  UnitVector base;
  double radius;          // arccos(c)
  Eigen::MatrixXd shape;  // tangent identity for circular contours
};

// Lowest minimizer of sum_i rho_tau(p_i - c): the ceil(tau n)-th order
// statistic (1-based). tau must lie in (0, 1).
double projection_quantile(std::span<const double> projections, double tau);

// Same, for the projections of `sample` onto `mu`.
double empirical_projection_quantile(const DirectionalSample& sample, const UnitVector& mu,
                                     double tau);

// Sum of rho_tau(p_i - c), rho_tau(z) = z (tau - 1[z <= 0]).
double check_loss(std::span<const double> projections, double tau, double c);

QuantileSummary circular_quantile(const DirectionalSample& sample, const UnitVector& mu,
                                  double tau);
QuantileSummary elliptical_projection_quantile(const DirectionalSample& sample,
                                               const MahalanobisTransform& t, double tau);

// minor_c = cos(r s_min), major_c = cos(r s_max) with r = arccos(c_g) and s
// the tangent singular values of the inverse operator.
struct SemiAxes {
  double minor_c;
  double major_c;
};
SemiAxes contour_semiaxes(const MahalanobisTransform& t, double c_g);

// d = 3 polylines with n_points points at equally spaced angles on
// [0, 2 pi); `closed` appends a copy of the first point.
ContourPolyline circular_contour(const UnitVector& mu, double c, std::size_t n_points,
                                 bool closed = false);
ContourPolyline elliptical_contour(const MahalanobisTransform& t, double c_g,
                                   std::size_t n_points, bool closed = false);

ContourGenerator circular_contour_generator(const UnitVector& mu, double c);
ContourGenerator elliptical_contour_generator(const MahalanobisTransform& t, double c_g);

/// Angular Mahalanobis depth D / (1 + D) with D the (right-continuous)
/// projection CDF at x . mu. Sorted projections are kept for fast queries.
class ProjectionDepth {
 public:
  ProjectionDepth(const DirectionalSample& sample, const UnitVector& mu);
  explicit ProjectionDepth(std::vector<double> projections, UnitVector mu);

  // Empirical CDF of the projections at t: #{p_i <= t} / n.
  double cdf(double t) const;
  double depth_at(double t) const;
  double depth(const UnitVector& x) const { return depth_at(x.dot(mu_)); }
  const UnitVector& mu() const noexcept { return mu_; }

 private:
  std::vector<double> sorted_;
  UnitVector mu_;
};

double depth_from_cdf(double d);

double amhd(const DirectionalSample& sample, const UnitVector& mu, const UnitVector& x);
double amhd(const ProjectionLaw& law, const UnitVector& mu, const UnitVector& x);

// Elliptical Mahalanobis depth: AMHD of G(y) against the transformed sample.
class EllipticalDepth {
 public:
  EllipticalDepth(const DirectionalSample& sample, MahalanobisTransform t);
  double depth(const UnitVector& y) const;
  const MahalanobisTransform& transform() const noexcept { return transform_; }

 private:
  MahalanobisTransform transform_;
  ProjectionDepth inner_;
};

double emhd(const DirectionalSample& sample, const MahalanobisTransform& t, const UnitVector& y);

struct TrimResult {
  DirectionalSample kept;
  DirectionalSample removed;
  std::vector<std::size_t> kept_indices;
  std::vector<std::size_t> removed_indices;
};

// Removes points strictly below the contour: x . mu < c (circular) or
// G(y) . mu_hat < c^G (elliptical). Points on the contour are kept.
TrimResult trim(const DirectionalSample& sample, const QuantileSummary& summary);

}  // namespace dirquant
