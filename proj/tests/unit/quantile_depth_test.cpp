#include "dirquant/quantile_depth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dirquant/distributions.hpp"
#include "dirquant/error.hpp"
#include "oracles.hpp"

using namespace dirquant;

namespace {

MahalanobisTransform random_transform(std::mt19937_64& gen) {
  const UnitVector mu(oracle::random_unit(3, gen));
  const TangentBasis tb = tangent_basis(mu);
  std::uniform_real_distribution<double> u(0.05, 1.0), ang(0.0, std::numbers::pi);
  const double l1 = u(gen), l2 = u(gen) * 0.3, a = ang(gen);
  const Eigen::Vector2d e1(std::cos(a), std::sin(a)), e2(-std::sin(a), std::cos(a));
  const Eigen::Matrix2d c2 = l1 * e1 * e1.transpose() + l2 * e2 * e2.transpose();
  const Eigen::MatrixXd c3 = tb.axes * c2 * tb.axes.transpose();
  return MahalanobisTransform::from_covariance(SpdShape(c3, mu), mu);
}

}  // namespace

TEST(ProjectionQuantile, OrderStatisticRule) {
  const std::vector<double> p{0.9, 0.1, 0.5, 0.7};
  EXPECT_EQ(projection_quantile(p, 0.25), 0.1);  // ceil(1) = 1st
  EXPECT_EQ(projection_quantile(p, 0.26), 0.5);  // ceil(1.04) = 2nd
  EXPECT_EQ(projection_quantile(p, 0.5), 0.5);
  EXPECT_EQ(projection_quantile(p, 0.99), 0.9);
  EXPECT_EQ(projection_quantile(std::vector<double>{0.3}, 0.5), 0.3);
  EXPECT_THROW(projection_quantile(p, 0.0), Error);
  EXPECT_THROW(projection_quantile(p, 1.0), Error);
  EXPECT_THROW(projection_quantile(std::vector<double>{}, 0.5), Error);
}

TEST(ProjectionQuantile, MinimizesCheckLossAgainstGridScan) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), lev(0.01, 0.99);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> p(1 + trial % 15);
    for (auto& v : p) v = u(gen);
    const double tau = lev(gen);
    const double c = projection_quantile(p, tau);
    EXPECT_LE(check_loss(p, tau, c), oracle::grid_min_check_loss(p, tau, 20001) + 1e-12);
    EXPECT_NEAR(check_loss(p, tau, c), oracle::check_loss(p, tau, c), 1e-14);
  }
}

TEST(CircularQuantile, UsesProjectionsOntoMu) {
  DirectionalSample s(3);
  for (double th : {0.1, 0.2, 0.3, 0.4}) s.push_back(UnitVector(oracle::spherical(th, 1.0)));
  const QuantileSummary q = circular_quantile(s, UnitVector::basis(3, 2), 0.5);
  EXPECT_DOUBLE_EQ(q.c, std::cos(0.3));  // 2nd smallest projection
  EXPECT_EQ(q.kind, ContourKind::kCircular);
  EXPECT_EQ(*q.minor_c, q.c);
  EXPECT_EQ(*q.major_c, q.c);
}

TEST(ContourSemiaxes, MatchDensePolyline) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const MahalanobisTransform t = random_transform(gen);
    const double cg = 0.95;
    const SemiAxes axes = contour_semiaxes(t, cg);
    const ContourPolyline poly = elliptical_contour(t, cg, 20000);
    double lo = 1.0, hi = -1.0;
    for (const auto& x : poly.points) {
      lo = std::min(lo, x.dot(t.mu_hat()));
      hi = std::max(hi, x.dot(t.mu_hat()));
    }
    EXPECT_NEAR(hi, axes.minor_c, 1e-6);
    EXPECT_NEAR(lo, axes.major_c, 1e-6);
    EXPECT_NEAR(axes.minor_c, cg, 1e-9);
  }
}

TEST(Contours, CircularContourSitsAtLevel) {
  const UnitVector mu(Eigen::Vector3d(1, 2, 3).normalized());
  const ContourPolyline p = circular_contour(mu, 0.8, 50, true);
  ASSERT_EQ(p.points.size(), 51u);
  for (const auto& x : p.points) EXPECT_NEAR(x.dot(mu), 0.8, 1e-12);
  EXPECT_EQ(p.points.front().coords(), p.points.back().coords());
  EXPECT_THROW(circular_contour(UnitVector::basis(4, 0), 0.5, 10), Error);
}

TEST(Contours, EllipticalContourMapsToCircle) {
  std::mt19937_64 gen(29);
  const MahalanobisTransform t = random_transform(gen);
  const ContourPolyline p = elliptical_contour(t, 0.9, 64);
  for (const auto& x : p.points) EXPECT_NEAR(apply_forward(t, x).dot(t.mu_hat()), 0.9, 1e-10);
}

TEST(Contours, GeneratorInHigherDimension) {
  const UnitVector mu = UnitVector::basis(5, 4);
  const ContourGenerator g = circular_contour_generator(mu, 0.6);
  EXPECT_NEAR(g.radius, std::acos(0.6), 1e-15);
  EXPECT_EQ(g.shape.rows(), 5);
}

TEST(Depth, AngularDepthIsMonotoneInProjection) {
  RandomStream rng(41);
  const DirectionalSample s = vmf_sample(VmfParams(UnitVector::basis(3, 2), 6.0), 300, rng);
  const ProjectionDepth d(s, UnitVector::basis(3, 2));
  double prev = -1.0;
  for (double t = -1.0; t <= 1.0; t += 0.01) {
    const double v = d.depth_at(t);
    EXPECT_GE(v, prev);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 0.5);
    prev = v;
  }
  EXPECT_EQ(d.depth_at(-1.0), 0.0);
  EXPECT_EQ(d.depth_at(1.0), 0.5);
}

TEST(Depth, SampleDepthApproachesLawDepth) {
  RandomStream rng(43);
  const VmfParams p(UnitVector::basis(3, 2), 5.0);
  const DirectionalSample s = vmf_sample(p, 20000, rng);
  const ProjectionLaw law = projection_law(p);
  for (double th : {0.2, 0.5, 0.9}) {
    const UnitVector x(oracle::spherical(th, 0.3));
    EXPECT_NEAR(amhd(s, p.mu, x), amhd(law, p.mu, x), 0.01);
  }
}

TEST(Depth, EllipticalDepthOrdersByTransformedProjection) {
  RandomStream rng(47);
  const DirectionalSample s = kent_sample(KentParams::canonical(12.0, 5.0), 200, rng);
  const UnitVector mu = fisher_median(s).direction;
  const MahalanobisTransform t = fit_transform(s, mu);
  const EllipticalDepth ed(s, t);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); j += 7) {
      const double pi = apply_forward(t, s[i]).dot(mu), pj = apply_forward(t, s[j]).dot(mu);
      if (pi < pj) {
        EXPECT_LE(ed.depth(s[i]), ed.depth(s[j]));
      }
    }
  }
  EXPECT_DOUBLE_EQ(emhd(s, t, s[3]), ed.depth(s[3]));
}

TEST(Trim, RemovesStrictlyBelowContour) {
  DirectionalSample s(3);
  for (double th : {0.1, 0.2, 0.3, 0.4, 0.5}) s.push_back(UnitVector(oracle::spherical(th, 2.0)));
  const QuantileSummary q = circular_quantile(s, UnitVector::basis(3, 2), 0.4);  // 2nd smallest
  const TrimResult r = trim(s, q);
  EXPECT_EQ(r.removed_indices, (std::vector<std::size_t>{4}));
  EXPECT_EQ(r.kept_indices, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(r.kept.size() + r.removed.size(), s.size());
}

TEST(Trim, CountMatchesQuantileBookkeeping) {
  RandomStream rng(53);
  const DirectionalSample s = vmf_sample(VmfParams(UnitVector::basis(3, 2), 9.0), 598, rng);
  const QuantileSummary q = circular_quantile(s, UnitVector::basis(3, 2), 0.15);
  const TrimResult r = trim(s, q);
  const double expected = std::ceil(0.15 * 598);
  EXPECT_LE(std::abs(static_cast<double>(r.removed.size()) - expected), 1.0);
  const QuantileSummary tiny = circular_quantile(s, UnitVector::basis(3, 2), 1e-6);
  EXPECT_TRUE(trim(s, tiny).removed.empty());
}

TEST(Trim, EllipticalDiffersFromCircularOnKentData) {
  RandomStream rng(59);
  const DirectionalSample s = kent_sample(KentParams::canonical(12.0, 5.0), 200, rng);
  const UnitVector mu = fisher_median(s).direction;
  const TrimResult c = trim(s, circular_quantile(s, mu, 0.25));
  const TrimResult e = trim(s, elliptical_projection_quantile(s, fit_transform(s, mu), 0.25));
  EXPECT_NE(c.removed_indices, e.removed_indices);
}

TEST(Sandwich, HoldsOnAnisotropicSamples) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    const DirectionalSample s = kent_sample(KentParams::canonical(10.0, 4.0), 200, rng);
    const UnitVector mu = fisher_median(s).direction;
    const MahalanobisTransform t = fit_transform(s, mu);
    for (double tau : {0.25, 0.5, 0.75}) {
      const QuantileSummary e = elliptical_projection_quantile(s, t, tau);
      const double c = circular_quantile(s, mu, tau).c;
      EXPECT_LE(*e.major_c, c + 1e-12);
      EXPECT_LE(c, *e.minor_c + 1e-12);
    }
  }
}
