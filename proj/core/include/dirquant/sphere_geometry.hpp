#pragma once

#include <Eigen/Dense>

namespace dirquant {

/// A point on the unit sphere S^{d-1}, d >= 2.
///
/// The checked constructor accepts coordinates whose norm is within 1e-6 of
/// one and renormalizes them; anything further away is rejected. Use
/// `normalized()` to project an arbitrary nonzero vector onto the sphere.
class UnitVector {
 public:
  explicit UnitVector(Eigen::VectorXd coords);

  static UnitVector normalized(const Eigen::VectorXd& v);
  // e_axis in dimension `dim`.
  static UnitVector basis(int dim, int axis);

  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }
  double dot(const UnitVector& other) const { return coords_.dot(other.coords_); }
  UnitVector operator-() const;

 private:
  struct Trusted {};
  UnitVector(Eigen::VectorXd coords, Trusted) : coords_(std::move(coords)) {}

  Eigen::VectorXd coords_;
};

/// Element of the tangent space at `base`. The norm of `vec` is a geodesic
/// length in radians.
class TangentVector {
 public:
  // Checked: requires |vec . base| <= 1e-9 |vec| + 1e-12.
  TangentVector(UnitVector base, Eigen::VectorXd vec);

  // Removes the normal component of `v` instead of rejecting it.
  static TangentVector project(const UnitVector& base, const Eigen::VectorXd& v);
  static TangentVector zero(const UnitVector& base);

  const UnitVector& base() const noexcept { return base_; }
  const Eigen::VectorXd& vec() const noexcept { return vec_; }
  double norm() const { return vec_.norm(); }
  TangentVector scaled(double t) const;

 private:
  struct Trusted {};
  TangentVector(UnitVector base, Eigen::VectorXd vec, Trusted)
      : base_(std::move(base)), vec_(std::move(vec)) {}

  UnitVector base_;
  Eigen::VectorXd vec_;
};

/// Orthonormal coordinates for the tangent space at `base`: `axes` is d x (d-1)
/// with orthonormal columns, each orthogonal to `base`.
struct TangentBasis {
  UnitVector base;
  Eigen::MatrixXd axes;

  // Tangent coordinates of an ambient vector (components along the axes).
  Eigen::VectorXd to_coords(const Eigen::VectorXd& ambient) const {
    return axes.transpose() * ambient;
  }
  Eigen::VectorXd to_ambient(const Eigen::VectorXd& coords) const {
    return axes * coords;
  }
};

// Inner products are clamped into [-1, 1] before any arccos.
inline constexpr double kCutLocusTolerance = 1e-9;

// Exp_mu(v) = mu cos|v| + (v/|v|) sin|v|. Throws kCutLocus for |v| >= pi.
UnitVector exp_map(const TangentVector& v);

// Log_mu(x) = (theta / sin theta) (I - mu mu^T) x with theta the geodesic
// distance. Throws kCutLocus when x . mu <= -1 + 1e-9.
TangentVector log_map(const UnitVector& mu, const UnitVector& x);

// arccos of the clamped inner product, in [0, pi].
double geodesic_distance(const UnitVector& mu, const UnitVector& x);

// Point at parameter t in [0, 1] on the geodesic leaving v.base() with
// initial velocity v.
UnitVector geodesic_point(const TangentVector& v, double t);

// Deterministic basis from the Householder reflection sending e_d to mu;
// the reflected e_1..e_{d-1} are the axes, with the last one negated when
// needed so that (axes, mu) has positive determinant. For mu = e_d this is
// e_1..e_{d-1}.
TangentBasis tangent_basis(const UnitVector& mu);

}  // namespace dirquant
