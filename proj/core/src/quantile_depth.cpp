#include "dirquant/quantile_depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dirquant/error.hpp"

namespace dirquant {

namespace {

void require_level(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "quantile level must lie in (0, 1)");
  }
}

double safe_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

ContourGenerator generator_for(const UnitVector& mu, double c, Eigen::MatrixXd shape) {
  if (!(c >= -1.0 && c <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "contour level must lie in [-1, 1]");
  }
  return ContourGenerator{mu, safe_acos(c), std::move(shape)};
}

ContourPolyline trace(const ContourGenerator& g, ContourKind kind, std::size_t n_points,
                      bool closed) {
  if (g.base.dim() != 3) {
    throw Error(ErrorKind::kInvalidArgument,
                "polylines are emitted for d = 3; use the contour generator otherwise");
  }
  if (n_points < 1) throw Error(ErrorKind::kInvalidArgument, "need at least one contour point");
  const TangentBasis basis = tangent_basis(g.base);
  const Eigen::Vector3d e1 = basis.axes.col(0);
  const Eigen::Vector3d e2 = basis.axes.col(1);
  ContourPolyline out{std::numeric_limits<double>::quiet_NaN(), kind, {}};
  out.points.reserve(n_points + (closed ? 1 : 0));
  for (std::size_t k = 0; k < n_points; ++k) {
    const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                       static_cast<double>(n_points);
    const Eigen::VectorXd u = e1 * std::cos(phi) + e2 * std::sin(phi);
    const Eigen::VectorXd v = g.shape * (u * g.radius);
    out.points.push_back(exp_map(TangentVector::project(g.base, v)));
  }
  if (closed) out.points.push_back(out.points.front());
  return out;
}

}  // namespace

double check_loss(std::span<const double> projections, double tau, double c) {
  double sum = 0.0;
  for (double p : projections) {
    const double z = p - c;
    sum += z * (tau - (z <= 0.0 ? 1.0 : 0.0));
  }
  return sum;
}

double projection_quantile(std::span<const double> projections, double tau) {
  require_level(tau);
  if (projections.empty()) throw Error(ErrorKind::kInvalidArgument, "quantile of no data");
  std::vector<double> sorted(projections.begin(), projections.end());
  const std::size_t n = sorted.size();
  // ceil(tau n); the slack absorbs rounding in tau * n for integral products.
  const double rank = std::ceil(tau * static_cast<double>(n) - 1e-9);
  const std::size_t k = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(n)));
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   sorted.end());
  return sorted[k - 1];
}

double empirical_projection_quantile(const DirectionalSample& sample, const UnitVector& mu,
                                     double tau) {
  const std::vector<double> p = sample.projections(mu);
  return projection_quantile(p, tau);
}

QuantileSummary circular_quantile(const DirectionalSample& sample, const UnitVector& mu,
                                  double tau) {
  const double c = empirical_projection_quantile(sample, mu, tau);
  return QuantileSummary{tau, c, ContourKind::kCircular, c, c, mu, std::nullopt};
}

QuantileSummary elliptical_projection_quantile(const DirectionalSample& sample,
                                               const MahalanobisTransform& t, double tau) {
  require_level(tau);
  const DirectionalSample moved = apply_forward(t, sample);
  const double c = empirical_projection_quantile(moved, t.mu_hat(), tau);
  const SemiAxes axes = contour_semiaxes(t, c);
  return QuantileSummary{tau, c, ContourKind::kElliptical, axes.minor_c, axes.major_c,
                         t.mu_hat(), t};
}

SemiAxes contour_semiaxes(const MahalanobisTransform& t, double c_g) {
  if (!(c_g >= -1.0 && c_g <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "contour level must lie in [-1, 1]");
  }
  const double r = safe_acos(c_g);
  const Eigen::VectorXd& s = t.inverse_singular_values();
  const double s_max = s[s.size() - 1];
  if (!(r * s_max < std::numbers::pi)) {
    throw Error(ErrorKind::kCutLocus, "elliptical contour reaches the cut locus");
  }
  return SemiAxes{std::cos(r * s[0]), std::cos(r * s_max)};
}

ContourGenerator circular_contour_generator(const UnitVector& mu, double c) {
  return generator_for(mu, c, SpdShape::tangent_identity(mu).entries());
}

ContourGenerator elliptical_contour_generator(const MahalanobisTransform& t, double c_g) {
  ContourGenerator g = generator_for(t.mu_hat(), c_g, t.inverse_op().entries());
  const Eigen::VectorXd& s = t.inverse_singular_values();
  if (!(g.radius * s[s.size() - 1] < std::numbers::pi)) {
    throw Error(ErrorKind::kCutLocus, "elliptical contour reaches the cut locus");
  }
  return g;
}

ContourPolyline circular_contour(const UnitVector& mu, double c, std::size_t n_points,
                                 bool closed) {
  return trace(circular_contour_generator(mu, c), ContourKind::kCircular, n_points, closed);
}

ContourPolyline elliptical_contour(const MahalanobisTransform& t, double c_g,
                                   std::size_t n_points, bool closed) {
  // Exp(S Log(Exp(r u))) = Exp(S r u): the inverse map applied to the
  // circular contour, without the intermediate round trip.
  return trace(elliptical_contour_generator(t, c_g), ContourKind::kElliptical, n_points, closed);
}

ProjectionDepth::ProjectionDepth(const DirectionalSample& sample, const UnitVector& mu)
    : ProjectionDepth(sample.projections(mu), mu) {}

ProjectionDepth::ProjectionDepth(std::vector<double> projections, UnitVector mu)
    : sorted_(std::move(projections)), mu_(std::move(mu)) {
  if (sorted_.empty()) throw Error(ErrorKind::kInvalidArgument, "depth needs at least one point");
  std::sort(sorted_.begin(), sorted_.end());
}

double ProjectionDepth::cdf(double t) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double ProjectionDepth::depth_at(double t) const { return depth_from_cdf(cdf(t)); }

double depth_from_cdf(double d) { return d <= 0.0 ? 0.0 : d / (1.0 + d); }

double amhd(const DirectionalSample& sample, const UnitVector& mu, const UnitVector& x) {
  return ProjectionDepth(sample, mu).depth(x);
}

double amhd(const ProjectionLaw& law, const UnitVector& mu, const UnitVector& x) {
  if (law.dim() != mu.dim() || x.dim() != mu.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "depth: dimension mismatch");
  }
  return depth_from_cdf(law.cdf(x.dot(mu)));
}

EllipticalDepth::EllipticalDepth(const DirectionalSample& sample, MahalanobisTransform t)
    : transform_(std::move(t)),
      inner_(apply_forward(transform_, sample), transform_.mu_hat()) {}

double EllipticalDepth::depth(const UnitVector& y) const {
  return inner_.depth(apply_forward(transform_, y));
}

double emhd(const DirectionalSample& sample, const MahalanobisTransform& t, const UnitVector& y) {
  return EllipticalDepth(sample, t).depth(y);
}

TrimResult trim(const DirectionalSample& sample, const QuantileSummary& summary) {
  if (summary.mu.dim() != sample.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "trim: dimension mismatch");
  }
  if (summary.kind == ContourKind::kElliptical && !summary.transform) {
    throw Error(ErrorKind::kInvalidArgument, "elliptical trimming needs the fitted transform");
  }
  TrimResult out{DirectionalSample(sample.dim(), sample.source()),
                 DirectionalSample(sample.dim(), sample.source()), {}, {}};
  out.kept.set_hemisphere_folded(sample.hemisphere_folded());
  out.removed.set_hemisphere_folded(sample.hemisphere_folded());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double projection = 0.0;
    if (summary.kind == ContourKind::kCircular) {
      projection = sample[i].dot(summary.mu);
    } else {
      try {
        projection = apply_forward(*summary.transform, sample[i]).dot(summary.transform->mu_hat());
      } catch (const Error& e) {
        throw e.at_index(i);
      }
    }
    if (projection < summary.c) {
      out.removed.push_back(sample[i]);
      out.removed_indices.push_back(i);
    } else {
      out.kept.push_back(sample[i]);
      out.kept_indices.push_back(i);
    }
  }
  return out;
}

}  // namespace dirquant
