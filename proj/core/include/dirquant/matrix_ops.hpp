#pragma once

#include <optional>

#include <Eigen/Dense>

#include "dirquant/sphere_geometry.hpp"

namespace dirquant {

/// Symmetric positive semi-definite d x d operator. When `null_direction` is
/// set the operator lives on the tangent space of that point: it annihilates
/// the point (|S mu| <= 1e-9 |S|).
class SpdShape {
 public:
  explicit SpdShape(Eigen::MatrixXd entries,
                    std::optional<UnitVector> null_direction = std::nullopt);

  // I - mu mu^T.
  static SpdShape tangent_identity(const UnitVector& mu);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  const std::optional<UnitVector>& null_direction() const noexcept { return null_direction_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return entries_ * v; }

 private:
  Eigen::MatrixXd entries_;
  std::optional<UnitVector> null_direction_;
};

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // orthonormal columns matching `values`
};

inline constexpr int kJacobiSweepBudget = 100;

// Cyclic Jacobi for any real symmetric matrix. Each eigenvector is signed so
// that its largest-magnitude component (first one on ties) is positive.
// Throws kConvergenceFailure after kJacobiSweepBudget sweeps.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& m);

SymmetricEigen sym_eigen(const SpdShape& m);

// Largest eigenvalue magnitude.
double spectral_norm(const SpdShape& m);

// Tangent-subspace pseudo-root pair of a tangent covariance at `base`.
// normalized_inv_sqrt: Sigma^{-1/2} / |Sigma^{-1/2}|_2, spectral norm 1.
// normalized_sqrt:     |Sigma^{-1/2}|_2 Sigma^{1/2}, smallest tangent
//                      singular value 1.
// Both annihilate `base`. kRankDeficient when a tangent eigenvalue is
// <= 1e-12 times the largest one.
SpdShape normalized_inv_sqrt(const SpdShape& m, const UnitVector& base);
SpdShape normalized_sqrt(const SpdShape& m, const UnitVector& base);

// Eigenvalues (descending) of m restricted to the tangent space at `base`,
// in the coordinates of tangent_basis(base).
Eigen::VectorXd tangent_eigenvalues(const SpdShape& m, const UnitVector& base);

}  // namespace dirquant
