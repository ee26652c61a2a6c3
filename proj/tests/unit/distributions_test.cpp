#include "dirquant/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dirquant/error.hpp"
#include "oracles.hpp"

using namespace dirquant;

namespace {

constexpr double kPi = std::numbers::pi;

double vmf3_quantile(double kappa, double tau) {
  return 1.0 + std::log(tau + (1.0 - tau) * std::exp(-2.0 * kappa)) / kappa;
}

// One-sample Kolmogorov distance, written out for the tests.
double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace

TEST(SphereArea, LowDimensions) {
  EXPECT_NEAR(sphere_area_omega(2), 2.0, 1e-15);
  EXPECT_NEAR(sphere_area_omega(3), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area_omega(4), 4.0 * kPi, 1e-14);
}

TEST(ProjectionLaw, VmfMedianClosedForm) {
  const ProjectionLaw law = ProjectionLaw::von_mises_fisher(3, 7.0);
  EXPECT_NEAR(law.quantile(0.5), 1.0 + std::log((1.0 + std::exp(-14.0)) / 2.0) / 7.0, 1e-8);
}

TEST(ProjectionLaw, VmfQuantilesMatchClosedForm) {
  for (double kappa : {1.0, 7.0, 12.0}) {
    const ProjectionLaw law = ProjectionLaw::von_mises_fisher(3, kappa);
    for (double tau : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      EXPECT_NEAR(theoretical_quantile(law, tau), vmf3_quantile(kappa, tau), 1e-8)
          << kappa << " " << tau;
    }
  }
}

TEST(ProjectionLaw, VmfDensityAndCdfClosedForm) {
  const double kappa = 4.0;
  const ProjectionLaw law = ProjectionLaw::von_mises_fisher(3, kappa);
  for (double t : {-0.9, -0.2, 0.3, 0.8, 0.99}) {
    const double pdf = kappa * std::exp(kappa * t) / (2.0 * std::sinh(kappa));
    const double cdf = (std::exp(kappa * t) - std::exp(-kappa)) / (2.0 * std::sinh(kappa));
    EXPECT_NEAR(law.density(t), pdf, 1e-10);
    EXPECT_NEAR(law.cdf(t), cdf, 1e-10);
  }
  EXPECT_EQ(law.cdf(-1.0), 0.0);
  EXPECT_EQ(law.cdf(1.0), 1.0);
}

TEST(ProjectionLaw, UniformIsLinearOnS2) {
  const ProjectionLaw law = ProjectionLaw::uniform(3);
  for (double tau : {0.05, 0.3, 0.5, 0.8}) EXPECT_NEAR(law.quantile(tau), 2.0 * tau - 1.0, 1e-9);
  EXPECT_NEAR(law.density(0.4), 0.5, 1e-12);
}

TEST(ProjectionLaw, HigherDimensionAgainstQuadratureOracle) {
  for (int dim : {2, 4, 6}) {
    const double kappa = 3.0;
    const ProjectionLaw law = ProjectionLaw::von_mises_fisher(dim, kappa);
    // F(t) = int_{acos t}^{pi} sin^{d-2} e^{kappa cos} / int_0^pi (same).
    auto g = [&](double th) { return std::pow(std::sin(th), dim - 2) * std::exp(kappa * std::cos(th)); };
    const double total = oracle::gauss_legendre(g, 0.0, kPi, 400);
    for (double t : {-0.5, 0.0, 0.6, 0.95}) {
      const double expected = oracle::gauss_legendre(g, std::acos(t), kPi, 400) / total;
      EXPECT_NEAR(law.cdf(t), expected, 1e-10) << dim << " " << t;
    }
    for (double tau : {0.25, 0.5, 0.75}) EXPECT_NEAR(law.cdf(law.quantile(tau)), tau, 1e-10);
  }
}

TEST(ProjectionLaw, RejectsBadLevels) {
  const ProjectionLaw law = ProjectionLaw::uniform(3);
  for (double tau : {0.0, 1.0, -0.1, std::nan("")}) {
    EXPECT_THROW(law.quantile(tau), Error);
  }
}

TEST(VmfDensity, IntegratesToOne) {
  for (double kappa : {0.0, 0.5, 7.0, 30.0}) {
    const VmfParams p(UnitVector(Eigen::Vector3d(0.6, 0.0, 0.8)), kappa);
    const double total =
        oracle::sphere_integral([&](const Eigen::Vector3d& x) { return vmf_density(p, UnitVector(x)); }, 60, 60);
    EXPECT_NEAR(total, 1.0, 1e-9) << kappa;
  }
  const VmfParams p(UnitVector::basis(3, 2), 2.0);
  EXPECT_NEAR(vmf_density(p, UnitVector::basis(3, 2)), 2.0 * std::exp(2.0) / (4.0 * kPi * std::sinh(2.0)), 1e-14);
}

TEST(VmfDensity, LargeKappaStaysFinite) {
  const VmfParams p(UnitVector::basis(5, 4), 2000.0);
  const double at_mode = vmf_density(p, UnitVector::basis(5, 4));
  EXPECT_TRUE(std::isfinite(at_mode));
  EXPECT_GT(at_mode, 0.0);
}

TEST(KentParams, Validation) {
  EXPECT_THROW(KentParams::canonical(4.0, 2.0), Error);  // 2 beta = kappa: not unimodal
  EXPECT_NO_THROW(KentParams::canonical(5.0, 2.0));
  Eigen::Matrix3d bad = Eigen::Matrix3d::Zero();
  bad(2, 2) = 1.0;
  EXPECT_THROW(KentParams(UnitVector::basis(3, 2), 5.0, bad), Error);
  EXPECT_THROW(KentParams::with_axes(UnitVector::basis(3, 2), Eigen::Vector3d(0, 0, 1), 5.0, 1.0), Error);
}

TEST(KentParams, WithAxesOrthogonalizes) {
  const UnitVector mu(Eigen::Vector3d(1, 1, 1).normalized());
  const KentParams k = KentParams::with_axes(mu, Eigen::Vector3d(1, 0, 0), 10.0, 3.0);
  EXPECT_LT((k.shape() * mu.coords()).norm(), 1e-14);
  EXPECT_NEAR(k.shape_max_eigenvalue(), 3.0, 1e-12);
  EXPECT_NEAR(k.shape().trace(), 0.0, 1e-14);
}

TEST(KentParams, NormalizerAgainstQuadratureOracle) {
  for (auto [kappa, beta] : {std::pair{5.0, 2.0}, {7.0, 3.0}, {10.0, 4.0}, {12.0, 5.0}, {50.0, 10.0}}) {
    const KentParams k = KentParams::canonical(kappa, beta);
    const double z = oracle::sphere_integral(
        [&](const Eigen::Vector3d& x) {
          return std::exp(kappa * x[2] + beta * (x[0] * x[0] - x[1] * x[1]));
        },
        200, 80);
    EXPECT_NEAR(k.log_normalizer(), -std::log(z), 1e-9) << kappa << " " << beta;
  }
}

TEST(KentDensity, IntegratesToOne) {
  const KentParams k = KentParams::with_axes(UnitVector(Eigen::Vector3d(0, 0.6, 0.8)),
                                             Eigen::Vector3d(1, 0, 0), 12.0, 5.0);
  const double total = oracle::sphere_integral(
      [&](const Eigen::Vector3d& x) { return kent_density(k, UnitVector(x)); }, 200, 80);
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(UniformSample, SecondMoments) {
  RandomStream rng(4);
  const std::size_t n = 40000;
  const DirectionalSample s = uniform_sphere_sample(4, n, rng);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(4, 4);
  for (const auto& x : s) {
    mean += x.coords();
    second += x.coords() * x.coords().transpose();
  }
  mean /= n;
  second /= n;
  EXPECT_LT(mean.norm(), 0.02);
  EXPECT_LT((second - 0.25 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.01);
}

TEST(VmfSample, MeanResultantMatchesTheory) {
  RandomStream rng(8);
  const double kappa = 7.0;
  const UnitVector mu(Eigen::Vector3d(1, -2, 2).normalized());
  const std::size_t n = 40000;
  const DirectionalSample s = vmf_sample(VmfParams(mu, kappa), n, rng);
  double mean_t = 0.0;
  Eigen::Vector3d resultant = Eigen::Vector3d::Zero();
  for (const auto& x : s) {
    mean_t += x.dot(mu);
    resultant += x.coords();
  }
  mean_t /= n;
  const double expected = 1.0 / std::tanh(kappa) - 1.0 / kappa;
  // sd of T is below 0.15 for kappa = 7.
  EXPECT_NEAR(mean_t, expected, 4.0 * 0.15 / std::sqrt(n));
  EXPECT_LT(geodesic_distance(UnitVector::normalized(resultant), mu), 0.01);
}

TEST(VmfSample, ProjectionsFollowTheLawInHigherDimension) {
  for (int dim : {2, 5}) {
    RandomStream rng(10 + dim);
    const VmfParams p(UnitVector::basis(dim, 0), 4.0);
    const ProjectionLaw law = projection_law(p);
    const std::size_t n = 5000;
    const DirectionalSample s = vmf_sample(p, n, rng);
    const double d = ks_distance(s.projections(p.mu), [&](double t) { return law.cdf(t); });
    EXPECT_LT(d, 1.63 / std::sqrt(static_cast<double>(n))) << dim;  // 1% critical value
  }
}

TEST(VmfSample, S2DrawAgreesWithClosedFormCdf) {
  RandomStream rng(12);
  const double kappa = 12.0;
  std::vector<double> t;
  for (int i = 0; i < 5000; ++i) t.push_back(vmf_s2_projection_draw(kappa, rng));
  const double d = ks_distance(t, [&](double x) {
    return (std::exp(kappa * (x - 1.0)) - std::exp(-2.0 * kappa)) / (1.0 - std::exp(-2.0 * kappa));
  });
  EXPECT_LT(d, 1.63 / std::sqrt(5000.0));
}

TEST(KentSample, SecondMomentsMatchDensity) {
  // A = diag(beta, -beta, 0): the spread is larger along the first axis.
  const double kappa = 12.0, beta = 5.0;
  const KentParams k = KentParams::canonical(kappa, beta);
  auto moment = [&](int axis) {
    return oracle::sphere_integral(
        [&](const Eigen::Vector3d& x) { return x[axis] * x[axis] * kent_density(k, UnitVector(x)); }, 200, 80);
  };
  const double m1 = moment(0), m2 = moment(1);
  ASSERT_GT(m1, 2.0 * m2);

  RandomStream rng(13);
  SamplerStats stats;
  const std::size_t n = 20000;
  const DirectionalSample s = kent_sample(k, n, rng, &stats);
  double s1 = 0.0, s2 = 0.0;
  for (const auto& x : s) {
    s1 += x[0] * x[0];
    s2 += x[1] * x[1];
  }
  s1 /= n;
  s2 /= n;
  // x_1^2 has sd below 0.2 here.
  EXPECT_NEAR(s1, m1, 4.0 * 0.2 / std::sqrt(n));
  EXPECT_NEAR(s2, m2, 4.0 * 0.2 / std::sqrt(n));
  EXPECT_EQ(stats.accepted, n);
  EXPECT_GE(stats.proposals, n);
  EXPECT_GT(stats.acceptance_rate(), 0.0);
}

TEST(KentSample, Deterministic) {
  const KentParams k = KentParams::canonical(7.0, 3.0);
  RandomStream a(77), b(77);
  const DirectionalSample x = kent_sample(k, 50, a);
  const DirectionalSample y = kent_sample(k, 50, b);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(x[i].coords(), y[i].coords());
}
