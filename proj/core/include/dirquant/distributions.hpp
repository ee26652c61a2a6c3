#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirquant/random.hpp"
#include "dirquant/sample.hpp"
#include "dirquant/sphere_geometry.hpp"

namespace dirquant {

// von Mises-Fisher M_d(mu, kappa); kappa = 0 is the uniform law.
struct VmfParams {
  VmfParams(UnitVector mu, double kappa);

  UnitVector mu;
  double kappa;
};

/// Kent law on S^2: density c exp(kappa x.mu + x^T A x) with A symmetric and
/// A mu = 0. Requires 2 lambda_max(A) < kappa (single mode at mu). The
/// normalizing constant is computed once at construction.
class KentParams {
 public:
  KentParams(UnitVector mu, double kappa, Eigen::Matrix3d shape);

  // mu = e_3, A = diag(beta, -beta, 0).
  static KentParams canonical(double kappa, double beta);
  // A = beta (g1 g1^T - g2 g2^T) with g2 = mu x g1. `major_axis` is
  // orthogonalized against mu.
  static KentParams with_axes(const UnitVector& mu, const Eigen::Vector3d& major_axis,
                              double kappa, double beta);

  const UnitVector& mu() const noexcept { return mu_; }
  double kappa() const noexcept { return kappa_; }
  const Eigen::Matrix3d& shape() const noexcept { return shape_; }
  double shape_max_eigenvalue() const noexcept { return shape_max_eigenvalue_; }
  // log c, so that density(x) = exp(log c + kappa x.mu + x^T A x).
  double log_normalizer() const noexcept { return log_normalizer_; }

 private:
  UnitVector mu_;
  double kappa_;
  Eigen::Matrix3d shape_;
  double shape_max_eigenvalue_;
  double log_normalizer_;
};

/// Law of the projection T = X . mu of a rotationally symmetric X on S^{d-1}
/// with density proportional to f(x . mu).
///
/// Density  f~(t) = omega_{d-1} c_d (1 - t^2)^{(d-3)/2} f(t),
/// CDF      F~(t) by adaptive quadrature.
/// Integration runs in the co-latitude theta = arccos(t), where the
/// integrand sin^{d-2}(theta) f(cos theta) is smooth for every d >= 2.
/// Cumulative masses at fixed panel edges are cached at construction.
class ProjectionLaw {
 public:
  // `profile` is f on [-1, 1], up to a constant factor.
  ProjectionLaw(int dim, std::function<double(double)> profile, std::string label = "custom");

  static ProjectionLaw von_mises_fisher(int dim, double kappa);
  static ProjectionLaw uniform(int dim);

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }

  double density(double t) const;
  double cdf(double t) const;
  // Unique c with F~(c) = tau, by bisection to |F~(c) - tau| <= 1e-10.
  double quantile(double tau) const;

  // c_d for the profile as supplied, i.e. the spherical density is
  // normalizing_constant() * profile(x . mu).
  double normalizing_constant() const noexcept { return normalizing_constant_; }

 private:
  double integrand(double theta) const;
  double mass_above(double theta) const;  // integral of the integrand over [0, theta]

  int dim_;
  std::function<double(double)> profile_;
  std::string label_;
  std::vector<double> edges_;       // panel edges in theta, 0 .. pi
  std::vector<double> cumulative_;  // integral over [0, edges_[k]]
  double total_ = 0.0;
  double panel_tol_ = 0.0;
  double normalizing_constant_ = 0.0;
};

// Surface area of S^{d-2}:
// omega_{d-1} = 2 pi^{(d-1)/2} / Gamma((d-1)/2).
double sphere_area_omega(int dim);

double vmf_density(const VmfParams& p, const UnitVector& x);
double kent_density(const KentParams& p, const UnitVector& x);

ProjectionLaw projection_law(const VmfParams& p);
double theoretical_quantile(const ProjectionLaw& law, double tau);

DirectionalSample uniform_sphere_sample(int dim, std::size_t n, RandomStream& rng);
DirectionalSample vmf_sample(const VmfParams& p, std::size_t n, RandomStream& rng);

struct SamplerStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

inline constexpr std::size_t kKentRejectionCap = 1'000'000;

// Exact rejection sampler with a vMF(mu, kappa) envelope, accepting with
// probability exp(x^T A x - lambda_max(A)). Throws kSamplerStall after
// kKentRejectionCap consecutive rejections.
DirectionalSample kent_sample(const KentParams& p, std::size_t n, RandomStream& rng,
                              SamplerStats* stats = nullptr);

// Co-latitude cosine T of one vMF draw on S^2 by exact CDF inversion.
double vmf_s2_projection_draw(double kappa, RandomStream& rng);

}  // namespace dirquant
