#include "dirquant/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dirquant/error.hpp"

namespace dirquant {

namespace {

constexpr double kSkipCosine = 1.0 - 1e-12;
constexpr double kGradientTolerance = 1e-9;

void require_dim(const DirectionalSample& sample, const UnitVector& v) {
  if (sample.dim() != v.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "sample and direction dimensions differ");
  }
}

}  // namespace

double median_objective(const DirectionalSample& sample, const UnitVector& gamma) {
  require_dim(sample, gamma);
  double sum = 0.0;
  for (const UnitVector& x : sample) sum += std::acos(std::clamp(x.dot(gamma), -1.0, 1.0));
  return sum;
}

FisherMedian fisher_median(const DirectionalSample& sample) {
  if (sample.empty()) throw Error(ErrorKind::kInvalidArgument, "median of an empty sample");
  Eigen::VectorXd resultant = Eigen::VectorXd::Zero(sample.dim());
  for (const UnitVector& x : sample) resultant += x.coords();
  if (resultant.norm() < 1e-12) {
    throw Error(ErrorKind::kDegenerateSample,
                "resultant length vanishes; supply an initial direction");
  }
  return fisher_median(sample, UnitVector::normalized(resultant));
}

FisherMedian fisher_median(const DirectionalSample& sample, const UnitVector& init) {
  if (sample.empty()) throw Error(ErrorKind::kInvalidArgument, "median of an empty sample");
  require_dim(sample, init);
  const double n = static_cast<double>(sample.size());

  UnitVector gamma = init;
  double objective = median_objective(sample, gamma);
  FisherMedian out{gamma, objective, objective, 0, false};

  Eigen::VectorXd gradient(sample.dim());
  for (int iter = 0; iter < kMedianMaxIterations; ++iter) {
    out.iterations = iter + 1;
    gradient.setZero();
    double weight = 0.0;
    for (const UnitVector& x : sample) {
      const double c = x.dot(gamma);
      if (std::abs(c) > kSkipCosine) continue;
      const double s = std::sqrt(1.0 - c * c);
      gradient -= (x.coords() - gamma.coords() * c) / s;
      weight += 1.0 / std::acos(c);
    }
    gradient -= gamma.coords() * gamma.coords().dot(gradient);
    if (gradient.norm() / n < kGradientTolerance || weight == 0.0) {
      out.converged = true;
      break;
    }

    const Eigen::VectorXd direction = -gradient / weight;
    bool improved = false;
    for (double step = 1.0; step > 1e-12; step *= 0.5) {
      const Eigen::VectorXd v = direction * step;
      if (v.norm() >= std::numbers::pi) continue;
      UnitVector candidate = exp_map(TangentVector::project(gamma, v));
      const double value = median_objective(sample, candidate);
      if (value < objective) {
        gamma = std::move(candidate);
        objective = value;
        improved = true;
        break;
      }
    }
    if (!improved) {
      // No representable decrease left along the gradient.
      out.converged = true;
      break;
    }
  }
  out.direction = gamma;
  out.objective = objective;
  return out;
}

SpdShape tangent_covariance(const DirectionalSample& sample, const UnitVector& mu) {
  if (sample.empty()) throw Error(ErrorKind::kInvalidArgument, "covariance of an empty sample");
  require_dim(sample, mu);
  const int d = sample.dim();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    try {
      const TangentVector v = log_map(mu, sample[i]);
      acc.noalias() += v.vec() * v.vec().transpose();
    } catch (const Error& e) {
      throw e.at_index(i);
    }
  }
  acc /= static_cast<double>(sample.size());
  acc = 0.5 * (acc + acc.transpose()).eval();
  return SpdShape(std::move(acc), mu);
}

MahalanobisTransform::MahalanobisTransform(UnitVector mu, SpdShape forward, SpdShape inverse,
                                           Eigen::VectorXd eigenvalues, Eigen::VectorXd stretch,
                                           bool identity)
    : mu_hat_(std::move(mu)),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      tangent_eigenvalues_(std::move(eigenvalues)),
      stretch_(std::move(stretch)),
      identity_(identity) {}

MahalanobisTransform MahalanobisTransform::from_covariance(const SpdShape& covariance,
                                                           const UnitVector& mu) {
  Eigen::VectorXd eigenvalues = dirquant::tangent_eigenvalues(covariance, mu);
  SpdShape forward = normalized_inv_sqrt(covariance, mu);
  const double largest = eigenvalues[0];
  const double smallest = eigenvalues[eigenvalues.size() - 1];
  Eigen::VectorXd stretch = (eigenvalues.reverse().array() / smallest).sqrt().matrix();
  stretch[0] = 1.0;
  if (smallest >= (1.0 - 1e-12) * largest) {
    SpdShape id = SpdShape::tangent_identity(mu);
    return MahalanobisTransform(mu, id, id, std::move(eigenvalues),
                                Eigen::VectorXd::Ones(mu.dim() - 1), true);
  }
  SpdShape inverse = normalized_sqrt(covariance, mu);
  return MahalanobisTransform(mu, std::move(forward), std::move(inverse), std::move(eigenvalues),
                              std::move(stretch), false);
}

MahalanobisTransform MahalanobisTransform::identity(const UnitVector& mu) {
  SpdShape id = SpdShape::tangent_identity(mu);
  return MahalanobisTransform(mu, id, id, Eigen::VectorXd::Ones(mu.dim() - 1),
                              Eigen::VectorXd::Ones(mu.dim() - 1), true);
}

MahalanobisTransform fit_transform(const DirectionalSample& sample, const UnitVector& mu) {
  return MahalanobisTransform::from_covariance(tangent_covariance(sample, mu), mu);
}

UnitVector apply_forward(const MahalanobisTransform& t, const UnitVector& y) {
  if (y.dim() != t.dim()) throw Error(ErrorKind::kInvalidArgument, "transform dimension mismatch");
  if (t.is_identity()) {
    // Still reject the cut locus so identity and general transforms agree.
    if (y.dot(t.mu_hat()) <= -1.0 + kCutLocusTolerance) {
      throw Error(ErrorKind::kCutLocus, "point is antipodal to the base point");
    }
    return y;
  }
  const TangentVector v = log_map(t.mu_hat(), y);
  return exp_map(TangentVector::project(t.mu_hat(), t.forward_op().apply(v.vec())));
}

UnitVector apply_inverse(const MahalanobisTransform& t, const UnitVector& x) {
  if (x.dim() != t.dim()) throw Error(ErrorKind::kInvalidArgument, "transform dimension mismatch");
  if (t.is_identity()) {
    if (x.dot(t.mu_hat()) <= -1.0 + kCutLocusTolerance) {
      throw Error(ErrorKind::kCutLocus, "point is antipodal to the base point");
    }
    return x;
  }
  const TangentVector v = log_map(t.mu_hat(), x);
  const TangentVector stretched = TangentVector::project(t.mu_hat(), t.inverse_op().apply(v.vec()));
  if (!(stretched.norm() < std::numbers::pi)) {
    throw Error(ErrorKind::kCutLocus, "inverse transform pushes the point past the cut locus");
  }
  return exp_map(stretched);
}

DirectionalSample apply_forward(const MahalanobisTransform& t, const DirectionalSample& sample) {
  DirectionalSample out(sample.dim(), sample.source());
  out.set_hemisphere_folded(sample.hemisphere_folded());
  out.reserve(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) {
    try {
      out.push_back(apply_forward(t, sample[i]));
    } catch (const Error& e) {
      throw e.at_index(i);
    }
  }
  return out;
}

DirectionalSample hemisphere_fold(const DirectionalSample& sample, const UnitVector& pole) {
  require_dim(sample, pole);
  DirectionalSample out(sample.dim(), sample.source());
  out.reserve(sample.size());
  for (const UnitVector& x : sample) out.push_back(x.dot(pole) < 0.0 ? -x : x);
  out.set_hemisphere_folded(true);
  return out;
}

}  // namespace dirquant
