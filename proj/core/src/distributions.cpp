#include "dirquant/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dirquant/error.hpp"
#include "dirquant/quadrature.hpp"

namespace dirquant {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTinyKappa = 1e-8;
constexpr int kLawPanels = 64;

// Largest value of g over a uniform grid on [a, b] refined geometrically
// towards both ends, used to turn a relative tolerance into an absolute one.
double integrand_scale(const std::function<double(double)>& g, double a, double b) {
  double peak = 0.0;
  const auto visit = [&](double x) {
    const double v = std::abs(g(x));
    if (std::isfinite(v)) peak = std::max(peak, v);
  };
  for (int i = 0; i <= 1024; ++i) visit(a + (b - a) * i / 1024.0);
  for (int k = 1; k <= 40; ++k) {
    const double h = (b - a) * std::ldexp(1.0, -k);
    visit(a + h);
    visit(b - h);
  }
  return peak * (b - a);
}

// log I_nu(x) for x > 0.
double log_bessel_i(double nu, double x) {
  if (x <= 600.0) return std::log(std::cyl_bessel_i(nu, x));
  const double m = 4.0 * nu * nu;
  const double e = 8.0 * x;
  const double series = 1.0 - (m - 1.0) / e + (m - 1.0) * (m - 9.0) / (2.0 * e * e) -
                        (m - 1.0) * (m - 9.0) * (m - 25.0) / (6.0 * e * e * e);
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(series);
}

// I_0(z) e^{-z}, z >= 0.
double scaled_bessel_i0(double z) {
  if (z <= 600.0) return std::cyl_bessel_i(0.0, z) * std::exp(-z);
  return std::exp(log_bessel_i(0.0, z) - z);
}

// log of the vMF normalizing constant c_d: density = exp(log c_d + kappa t).
double log_vmf_normalizer(int d, double kappa) {
  if (kappa < kTinyKappa) {
    // 1 / |S^{d-1}| = Gamma(d/2) / (2 pi^{d/2})
    return std::lgamma(0.5 * d) - std::log(2.0) - 0.5 * d * std::log(kPi);
  }
  if (d == 3) {
    // kappa / (4 pi sinh kappa), written to avoid overflow.
    return std::log(kappa / (2.0 * kPi)) - kappa - std::log1p(-std::exp(-2.0 * kappa));
  }
  const double nu = 0.5 * d - 1.0;
  return nu * std::log(kappa) - 0.5 * d * std::log(2.0 * kPi) - log_bessel_i(nu, kappa);
}

// Eigenvalues (a >= b) of A restricted to the tangent plane of mu.
std::pair<double, double> tangent_shape_eigenvalues(const Eigen::Matrix3d& a,
                                                    const UnitVector& mu) {
  const TangentBasis basis = tangent_basis(mu);
  const Eigen::MatrixXd r = basis.axes.transpose() * a * basis.axes;
  const double mean = 0.5 * (r(0, 0) + r(1, 1));
  const double half_gap = std::hypot(0.5 * (r(0, 0) - r(1, 1)), 0.5 * (r(0, 1) + r(1, 0)));
  return {mean + half_gap, mean - half_gap};
}

}  // namespace

double sphere_area_omega(int dim) {
  if (dim < 2) throw Error(ErrorKind::kInvalidArgument, "dimension must be >= 2");
  const double h = 0.5 * (dim - 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

VmfParams::VmfParams(UnitVector mu_in, double kappa_in) : mu(std::move(mu_in)), kappa(kappa_in) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::kInvalidArgument, "vMF concentration must be finite and >= 0");
  }
}

KentParams::KentParams(UnitVector mu, double kappa, Eigen::Matrix3d shape)
    : mu_(std::move(mu)), kappa_(kappa), shape_(std::move(shape)) {
  if (mu_.dim() != 3) {
    throw Error(ErrorKind::kInvalidArgument, "the Kent law is implemented on S^2 only");
  }
  if (!(kappa_ >= 0.0) || !std::isfinite(kappa_) || !shape_.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "Kent parameters must be finite with kappa >= 0");
  }
  const double scale = std::max(1.0, shape_.cwiseAbs().maxCoeff());
  if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::kInvalidArgument, "Kent shape matrix must be symmetric");
  }
  shape_ = 0.5 * (shape_ + shape_.transpose()).eval();
  if ((shape_ * mu_.coords()).norm() > 1e-10 * scale) {
    throw Error(ErrorKind::kInvalidArgument, "Kent shape matrix must satisfy A mu = 0");
  }
  const auto [a, b] = tangent_shape_eigenvalues(shape_, mu_);
  shape_max_eigenvalue_ = std::max(a, 0.0);
  if (!(2.0 * shape_max_eigenvalue_ < kappa_)) {
    throw Error(ErrorKind::kInvalidArgument,
                "Kent parameters outside the unimodal regime 2 lambda_max(A) < kappa");
  }

  // Integrate exp(kappa cos(theta) + x^T A x - shift) over S^2. The
  // longitude integral is exact: 2 pi e^{(a+b) s^2 / 2} I_0((a-b) s^2 / 2).
  const double shift = kappa_ + shape_max_eigenvalue_;
  const double k = kappa_;
  const double top = a;
  const double gap = 0.5 * (a - b);
  const std::function<double(double)> g = [=](double theta) {
    const double s = std::sin(theta);
    const double s2 = s * s;
    return 2.0 * kPi * s *
           std::exp(k * std::cos(theta) + top * s2 - shift) * scaled_bessel_i0(gap * s2);
  };
  double z = 0.0;
  try {
    z = adaptive_simpson(g, 0.0, kPi, 1e-12 * integrand_scale(g, 0.0, kPi));
  } catch (const Error& e) {
    throw Error(ErrorKind::kNormalizationFailure, e.what());
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorKind::kNormalizationFailure, "Kent normalizing integral is not positive");
  }
  log_normalizer_ = -(shift + std::log(z));
}

KentParams KentParams::canonical(double kappa, double beta) {
  if (!(beta >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "Kent beta must be >= 0");
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  a(0, 0) = beta;
  a(1, 1) = -beta;
  return KentParams(UnitVector::basis(3, 2), kappa, a);
}

KentParams KentParams::with_axes(const UnitVector& mu, const Eigen::Vector3d& major_axis,
                                 double kappa, double beta) {
  if (mu.dim() != 3) throw Error(ErrorKind::kInvalidArgument, "Kent law needs d = 3");
  if (!(beta >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "Kent beta must be >= 0");
  const Eigen::Vector3d m = mu.coords();
  Eigen::Vector3d g1 = major_axis - m * m.dot(major_axis);
  if (!(g1.norm() > 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument, "major axis must not be parallel to mu");
  }
  g1.normalize();
  const Eigen::Vector3d g2 = m.cross(g1);
  const Eigen::Matrix3d a = beta * (g1 * g1.transpose() - g2 * g2.transpose());
  return KentParams(mu, kappa, a);
}

ProjectionLaw::ProjectionLaw(int dim, std::function<double(double)> profile, std::string label)
    : dim_(dim), profile_(std::move(profile)), label_(std::move(label)) {
  if (dim_ < 2) throw Error(ErrorKind::kInvalidArgument, "dimension must be >= 2");
  if (!profile_) throw Error(ErrorKind::kInvalidArgument, "projection profile is empty");
  const std::function<double(double)> g = [this](double theta) { return integrand(theta); };
  panel_tol_ = 1e-12 * integrand_scale(g, 0.0, kPi) / kLawPanels;
  if (!(panel_tol_ > 0.0)) {
    throw Error(ErrorKind::kQuadratureFailure, "projection profile vanishes numerically");
  }
  edges_.resize(kLawPanels + 1);
  cumulative_.resize(kLawPanels + 1);
  cumulative_[0] = 0.0;
  for (int k = 0; k <= kLawPanels; ++k) edges_[k] = kPi * k / kLawPanels;
  for (int k = 0; k < kLawPanels; ++k) {
    cumulative_[k + 1] = cumulative_[k] + adaptive_simpson(g, edges_[k], edges_[k + 1], panel_tol_);
  }
  total_ = cumulative_.back();
  if (!(total_ > 0.0) || !std::isfinite(total_)) {
    throw Error(ErrorKind::kQuadratureFailure, "projection law has no mass");
  }
  normalizing_constant_ = 1.0 / (sphere_area_omega(dim_) * total_);
}

ProjectionLaw ProjectionLaw::von_mises_fisher(int dim, double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw Error(ErrorKind::kInvalidArgument, "vMF concentration must be finite and >= 0");
  }
  return ProjectionLaw(
      dim, [kappa](double t) { return std::exp(kappa * (t - 1.0)); },
      "vmf(kappa=" + std::to_string(kappa) + ")");
}

ProjectionLaw ProjectionLaw::uniform(int dim) {
  return ProjectionLaw(dim, [](double) { return 1.0; }, "uniform");
}

double ProjectionLaw::integrand(double theta) const {
  const double s = std::sin(theta);
  const double weight = dim_ == 2 ? 1.0 : std::pow(std::max(s, 0.0), dim_ - 2);
  return weight * profile_(std::cos(theta));
}

double ProjectionLaw::mass_above(double theta) const {
  if (theta <= 0.0) return 0.0;
  if (theta >= kPi) return total_;
  const int k = std::min(static_cast<int>(theta / kPi * kLawPanels), kLawPanels - 1);
  return cumulative_[k] + adaptive_simpson([this](double x) { return integrand(x); },
                                           edges_[k], theta, panel_tol_);
}

double ProjectionLaw::density(double t) const {
  if (t < -1.0 || t > 1.0) return 0.0;
  const double one_minus_t2 = std::max(0.0, 1.0 - t * t);
  const double weight = dim_ == 3 ? 1.0 : std::pow(one_minus_t2, 0.5 * (dim_ - 3));
  return weight * profile_(t) / total_;
}

double ProjectionLaw::cdf(double t) const {
  if (t <= -1.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double f = 1.0 - mass_above(std::acos(t)) / total_;
  return std::clamp(f, 0.0, 1.0);
}

double ProjectionLaw::quantile(double tau) const {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "quantile level must lie in (0, 1)");
  }
  double lo = -1.0;
  double hi = 1.0;
  double mid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double f = cdf(mid);
    if (std::abs(f - tau) <= 1e-13) break;
    if (f < tau) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
  }
  return mid;
}

double vmf_density(const VmfParams& p, const UnitVector& x) {
  if (x.dim() != p.mu.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "vMF density: dimension mismatch");
  }
  const double t = std::clamp(x.dot(p.mu), -1.0, 1.0);
  const double log_c = log_vmf_normalizer(p.mu.dim(), p.kappa);
  return std::exp(log_c + (p.kappa < kTinyKappa ? 0.0 : p.kappa * t));
}

double kent_density(const KentParams& p, const UnitVector& x) {
  if (x.dim() != 3) throw Error(ErrorKind::kInvalidArgument, "Kent density: dimension mismatch");
  const Eigen::Vector3d v = x.coords();
  return std::exp(p.log_normalizer() + p.kappa() * v.dot(p.mu().coords()) +
                  v.dot(p.shape() * v));
}

ProjectionLaw projection_law(const VmfParams& p) {
  return ProjectionLaw::von_mises_fisher(p.mu.dim(), p.kappa);
}

double theoretical_quantile(const ProjectionLaw& law, double tau) { return law.quantile(tau); }

DirectionalSample uniform_sphere_sample(int dim, std::size_t n, RandomStream& rng) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "sample size must be >= 1");
  DirectionalSample out(dim, "uniform");
  out.reserve(n);
  Eigen::VectorXd v(dim);
  for (std::size_t i = 0; i < n; ++i) {
    do {
      for (int j = 0; j < dim; ++j) v[j] = rng.normal();
    } while (v.squaredNorm() < 1e-300);
    out.push_back(UnitVector::normalized(v));
  }
  return out;
}

double vmf_s2_projection_draw(double kappa, RandomStream& rng) {
  const double u = rng.uniform();
  if (kappa < kTinyKappa) return 2.0 * u - 1.0;
  const double t = 1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
  return std::clamp(t, -1.0, 1.0);
}

DirectionalSample vmf_sample(const VmfParams& p, std::size_t n, RandomStream& rng) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "sample size must be >= 1");
  const int d = p.mu.dim();
  const TangentBasis basis = tangent_basis(p.mu);
  DirectionalSample out(d, "vmf");
  out.reserve(n);

  if (d == 3) {
    for (std::size_t i = 0; i < n; ++i) {
      const double t = vmf_s2_projection_draw(p.kappa, rng);
      const double phi = 2.0 * kPi * rng.uniform();
      const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
      Eigen::VectorXd x = p.mu.coords() * t +
                          basis.axes.col(0) * (s * std::cos(phi)) +
                          basis.axes.col(1) * (s * std::sin(phi));
      out.push_back(UnitVector::normalized(x));
    }
    return out;
  }

  const ProjectionLaw law = projection_law(p);
  Eigen::VectorXd dir(d - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = law.quantile(rng.uniform());
    do {
      for (int j = 0; j < d - 1; ++j) dir[j] = rng.normal();
    } while (dir.squaredNorm() < 1e-300);
    dir.normalize();
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    Eigen::VectorXd x = p.mu.coords() * t + basis.axes * (dir * s);
    out.push_back(UnitVector::normalized(x));
  }
  return out;
}

DirectionalSample kent_sample(const KentParams& p, std::size_t n, RandomStream& rng,
                              SamplerStats* stats) {
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "sample size must be >= 1");
  const TangentBasis basis = tangent_basis(p.mu());
  const Eigen::Vector3d mu = p.mu().coords();
  const Eigen::Vector3d e1 = basis.axes.col(0);
  const Eigen::Vector3d e2 = basis.axes.col(1);
  const Eigen::Matrix3d& a = p.shape();
  const double ceiling = p.shape_max_eigenvalue();

  DirectionalSample out(3, "kent");
  out.reserve(n);
  SamplerStats local;
  std::size_t consecutive = 0;
  while (out.size() < n) {
    const double t = vmf_s2_projection_draw(p.kappa(), rng);
    const double phi = 2.0 * kPi * rng.uniform();
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    const Eigen::Vector3d x = mu * t + e1 * (s * std::cos(phi)) + e2 * (s * std::sin(phi));
    ++local.proposals;
    if (rng.uniform() < std::exp(x.dot(a * x) - ceiling)) {
      ++local.accepted;
      consecutive = 0;
      out.push_back(UnitVector::normalized(Eigen::VectorXd(x)));
    } else if (++consecutive >= kKentRejectionCap) {
      throw Error(ErrorKind::kSamplerStall, "Kent rejection sampler stalled");
    }
  }
  if (stats != nullptr) {
    stats->proposals += local.proposals;
    stats->accepted += local.accepted;
  }
  return out;
}

}  // namespace dirquant
