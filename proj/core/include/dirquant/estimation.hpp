#pragma once

#include <optional>

#include <Eigen/Dense>

#include "dirquant/matrix_ops.hpp"
#include "dirquant/sample.hpp"
#include "dirquant/sphere_geometry.hpp"

namespace dirquant {

struct FisherMedian {
  UnitVector direction;
  double objective;  // sum of geodesic distances at `direction`
  double initial_objective;
  int iterations;
  bool converged;
};

inline constexpr int kMedianMaxIterations = 500;

/// Empirical Fisher spherical median: a local minimizer of
/// gamma -> sum_i arccos(x_i . gamma).
///
/// Riemannian descent along the negative gradient, whose terms are the unit
/// tangent directions towards each point. Steps are measured in units of
/// 1 / sum_i (1/d_i), so a full step is a spherical Weiszfeld update; each
/// step starts at 1.0 and is halved until the objective decreases. Points
/// within 1e-12 (in cosine) of +-gamma are skipped. Stops when the mean
/// gradient norm drops below 1e-9, when no halving decreases the objective,
/// or after kMedianMaxIterations iterations.
///
/// Starts from the normalized mean; kDegenerateSample if the resultant
/// length is below 1e-12 (pass an initializer instead).
FisherMedian fisher_median(const DirectionalSample& sample);
FisherMedian fisher_median(const DirectionalSample& sample, const UnitVector& init);

// Sum of geodesic distances from gamma to the sample.
double median_objective(const DirectionalSample& sample, const UnitVector& gamma);

// (1/n) sum Log_mu(y_i) Log_mu(y_i)^T, uncentered; mu spans its null space.
SpdShape tangent_covariance(const DirectionalSample& sample, const UnitVector& mu);

/// Spherical Mahalanobis transformation around mu_hat:
///   G(y)      = Exp(F Log(y)),  F = (Sigma*)^{-1/2}, spectral norm 1
///   G^{-1}(x) = Exp(S Log(x)),  S = (Sigma*)^{1/2},  smallest singular value 1
/// Immutable once built.
class MahalanobisTransform {
 public:
  // Builds F and S from a tangent covariance at mu (kRankDeficient if the
  // covariance is singular on the tangent space).
  static MahalanobisTransform from_covariance(const SpdShape& covariance, const UnitVector& mu);
  static MahalanobisTransform identity(const UnitVector& mu);

  const UnitVector& mu_hat() const noexcept { return mu_hat_; }
  const SpdShape& forward_op() const noexcept { return forward_; }
  const SpdShape& inverse_op() const noexcept { return inverse_; }
  // Tangent eigenvalues of the covariance, descending.
  const Eigen::VectorXd& tangent_eigenvalues() const noexcept { return tangent_eigenvalues_; }
  // Tangent singular values of S, ascending; the first is 1.
  const Eigen::VectorXd& inverse_singular_values() const noexcept { return stretch_; }
  // True when all tangent eigenvalues agree to 1e-12 relative; then F and S
  // are exactly I - mu mu^T and G is the identity map.
  bool is_identity() const noexcept { return identity_; }
  int dim() const noexcept { return mu_hat_.dim(); }

 private:
  MahalanobisTransform(UnitVector mu, SpdShape forward, SpdShape inverse,
                       Eigen::VectorXd eigenvalues, Eigen::VectorXd stretch, bool identity);

  UnitVector mu_hat_;
  SpdShape forward_;
  SpdShape inverse_;
  Eigen::VectorXd tangent_eigenvalues_;
  Eigen::VectorXd stretch_;
  bool identity_;
};

MahalanobisTransform fit_transform(const DirectionalSample& sample, const UnitVector& mu);

UnitVector apply_forward(const MahalanobisTransform& t, const UnitVector& y);
// kCutLocus when |S Log(x)| >= pi: the inverse operator can expand.
UnitVector apply_inverse(const MahalanobisTransform& t, const UnitVector& x);

// Pointwise apply_forward; errors carry the index of the failing point.
DirectionalSample apply_forward(const MahalanobisTransform& t, const DirectionalSample& sample);

// Replaces x by -x whenever x . pole < 0 (ties left alone) and sets the
// hemisphere_folded flag.
DirectionalSample hemisphere_fold(const DirectionalSample& sample, const UnitVector& pole);

}  // namespace dirquant
