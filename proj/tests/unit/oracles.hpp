#pragma once

// Reference computations used only by the tests. They avoid the library's
// own code paths: brute-force grids, power iteration, plain QR rotations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline Eigen::VectorXd random_unit(int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = n01(gen);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

// Haar-ish random rotation: QR of a Gaussian matrix with sign fix and det +1.
inline Eigen::MatrixXd random_rotation(int dim, std::mt19937_64& gen) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = n01(gen);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

inline Eigen::Vector3d spherical(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

// Composite Gauss-Legendre (5 nodes per panel) on [a, b].
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                             int panels) {
  static const double x[] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                             0.9061798459386640};
  static const double w[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                             0.2369268850561891, 0.2369268850561891};
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) sum += w[k] * f(mid + 0.5 * h * x[k]);
  }
  return 0.5 * h * sum;
}

// Integral over S^2 of f, in (theta, phi) with the sin(theta) Jacobian.
inline double sphere_integral(const std::function<double(const Eigen::Vector3d&)>& f,
                              int theta_panels, int phi_panels) {
  return gauss_legendre(
      [&](double theta) {
        return std::sin(theta) *
               gauss_legendre([&](double phi) { return f(spherical(theta, phi)); }, 0.0,
                              2.0 * std::numbers::pi, phi_panels);
      },
      0.0, std::numbers::pi, theta_panels);
}

inline double check_loss(const std::vector<double>& p, double tau, double c) {
  double s = 0.0;
  for (double v : p) {
    const double z = v - c;
    s += z * (tau - (z <= 0.0 ? 1.0 : 0.0));
  }
  return s;
}

// Best value of the check loss over `points` equally spaced levels in [-1, 1].
inline double grid_min_check_loss(const std::vector<double>& p, double tau, int points) {
  double best = INFINITY;
  for (int k = 0; k < points; ++k) {
    const double c = -1.0 + 2.0 * k / (points - 1.0);
    best = std::min(best, check_loss(p, tau, c));
  }
  return best;
}

inline double power_iteration(const Eigen::MatrixXd& m, int iters = 5000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows()).normalized();
  v[0] += 0.1;
  double lambda = 0.0;
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd w = m * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    lambda = n;
    v = w / n;
  }
  return lambda;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace oracle
