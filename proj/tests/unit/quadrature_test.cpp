#include "dirquant/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dirquant/error.hpp"

using dirquant::adaptive_simpson;

TEST(AdaptiveSimpson, Polynomials) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return x * x * x; }, 0.0, 2.0, 1e-12), 4.0, 1e-12);
  EXPECT_NEAR(adaptive_simpson([](double) { return 1.0; }, -1.0, 3.0, 1e-12), 4.0, 1e-14);
}

TEST(AdaptiveSimpson, SmoothTranscendental) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12),
              2.0, 1e-11);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-12),
              std::sqrt(std::numbers::pi), 1e-11);
}

TEST(AdaptiveSimpson, NarrowPeakIsFound) {
  // exp(-2000 (x - 0.3)^2) on [0, 4]: narrow relative to the interval.
  const double exact = std::sqrt(std::numbers::pi / 2000.0);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(-2000.0 * (x - 0.3) * (x - 0.3)); },
                               0.0, 4.0, 1e-13),
              exact, 1e-11);
}

TEST(AdaptiveSimpson, ReversedAndEmptyIntervals) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return x; }, 1.0, 0.0, 1e-12), -0.5, 1e-14);
  EXPECT_EQ(adaptive_simpson([](double x) { return x; }, 1.0, 1.0, 1e-12), 0.0);
}

TEST(AdaptiveSimpson, NonFiniteIntegrandFails) {
  try {
    adaptive_simpson([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-10);
    FAIL();
  } catch (const dirquant::Error& e) {
    EXPECT_EQ(e.kind(), dirquant::ErrorKind::kQuadratureFailure);
  }
}
