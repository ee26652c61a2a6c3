#include "dirquant/sphere_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dirquant/error.hpp"

namespace dirquant {

namespace {

constexpr double kSmallAngle = 1e-8;

void require_same_dim(const UnitVector& a, const UnitVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kInvalidArgument,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                    std::to_string(b.dim()));
  }
}

// sin(t)/t, with the series near zero.
double sinc(double t) {
  if (t < kSmallAngle) return 1.0 - t * t / 6.0;
  return std::sin(t) / t;
}

// t/sin(t), with the series near zero (0/sin 0 := 1).
double inverse_sinc(double t) {
  if (t < kSmallAngle) return 1.0 + t * t / 6.0;
  return t / std::sin(t);
}

}  // namespace

UnitVector::UnitVector(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "unit vectors need dimension >= 2");
  }
  const double norm = coords_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6) {
    throw Error(ErrorKind::kInvalidArgument,
                "vector norm deviates from 1 by more than 1e-6");
  }
  coords_ /= norm;
}

UnitVector UnitVector::normalized(const Eigen::VectorXd& v) {
  if (v.size() < 2) {
    throw Error(ErrorKind::kInvalidArgument, "unit vectors need dimension >= 2");
  }
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::kInvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  return UnitVector(v / norm, Trusted{});
}

UnitVector UnitVector::basis(int dim, int axis) {
  if (dim < 2 || axis < 0 || axis >= dim) {
    throw Error(ErrorKind::kInvalidArgument, "invalid basis vector request");
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
  e[axis] = 1.0;
  return UnitVector(std::move(e), Trusted{});
}

UnitVector UnitVector::operator-() const { return UnitVector(-coords_, Trusted{}); }

TangentVector::TangentVector(UnitVector base, Eigen::VectorXd vec)
    : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.coords().size()) {
    throw Error(ErrorKind::kInvalidArgument, "tangent vector dimension mismatch");
  }
  const double normal = std::abs(vec_.dot(base_.coords()));
  if (!(normal <= 1e-9 * vec_.norm() + 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument, "vector is not tangent at its base point");
  }
}

TangentVector TangentVector::project(const UnitVector& base, const Eigen::VectorXd& v) {
  if (v.size() != base.coords().size()) {
    throw Error(ErrorKind::kInvalidArgument, "tangent vector dimension mismatch");
  }
  Eigen::VectorXd t = v - base.coords() * base.coords().dot(v);
  return TangentVector(base, std::move(t), Trusted{});
}

TangentVector TangentVector::zero(const UnitVector& base) {
  return TangentVector(base, Eigen::VectorXd::Zero(base.dim()), Trusted{});
}

TangentVector TangentVector::scaled(double t) const {
  return TangentVector(base_, vec_ * t, Trusted{});
}

UnitVector exp_map(const TangentVector& v) {
  const double theta = v.norm();
  if (!(theta < std::numbers::pi)) {
    throw Error(ErrorKind::kCutLocus, "tangent vector length reaches pi");
  }
  if (theta == 0.0) return v.base();
  Eigen::VectorXd x = v.base().coords() * std::cos(theta) + v.vec() * sinc(theta);
  return UnitVector::normalized(x);
}

TangentVector log_map(const UnitVector& mu, const UnitVector& x) {
  require_same_dim(mu, x);
  const double c = mu.dot(x);
  if (c <= -1.0 + kCutLocusTolerance) {
    throw Error(ErrorKind::kCutLocus, "point is antipodal to the base point");
  }
  Eigen::VectorXd z = x.coords() - mu.coords() * c;
  // atan2 keeps the angle accurate near 0 and pi where arccos is ill-conditioned.
  const double theta = std::atan2(z.norm(), c);
  z *= inverse_sinc(theta);
  return TangentVector::project(mu, z);
}

double geodesic_distance(const UnitVector& mu, const UnitVector& x) {
  require_same_dim(mu, x);
  return std::acos(std::clamp(mu.dot(x), -1.0, 1.0));
}

UnitVector geodesic_point(const TangentVector& v, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "geodesic parameter must lie in [0, 1]");
  }
  return exp_map(v.scaled(t));
}

TangentBasis tangent_basis(const UnitVector& mu) {
  const int d = mu.dim();
  const Eigen::VectorXd& m = mu.coords();
  // Householder vector w = e_d - mu; H = I - 2 w w^T / (w^T w).
  Eigen::VectorXd w = -m;
  const double tail = m.head(d - 1).squaredNorm();
  // 1 - mu_d without cancellation when mu is close to e_d.
  w[d - 1] = m[d - 1] > 0.0 ? tail / (1.0 + m[d - 1]) : 1.0 - m[d - 1];
  const double ww = w.squaredNorm();

  Eigen::MatrixXd axes(d, d - 1);
  if (tail == 0.0 && m[d - 1] > 0.0) {
    axes.setZero();
    for (int i = 0; i < d - 1; ++i) axes(i, i) = 1.0;
    return TangentBasis{mu, std::move(axes)};
  }
  for (int j = 0; j < d - 1; ++j) {
    Eigen::VectorXd col = -w * (2.0 * w[j] / ww);
    col[j] += 1.0;
    axes.col(j) = col;
  }
  // The reflection reverses orientation; flip one axis so that
  // (axes, mu) is positively oriented, as it is for mu = e_d.
  Eigen::MatrixXd frame(d, d);
  frame << axes, m;
  if (frame.determinant() < 0.0) axes.col(d - 2) = -axes.col(d - 2);
  return TangentBasis{mu, std::move(axes)};
}

}  // namespace dirquant
