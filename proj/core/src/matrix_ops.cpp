#include "dirquant/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "dirquant/error.hpp"

namespace dirquant {

namespace {

constexpr double kRankTolerance = 1e-12;

double operator_scale(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().maxCoeff();
}

// Tangent-space eigen-decomposition shared by the two roots.
struct TangentSpectrum {
  TangentBasis basis;
  SymmetricEigen eigen;  // in tangent coordinates
};

TangentSpectrum tangent_spectrum(const SpdShape& m, const UnitVector& base) {
  if (m.dim() != base.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "operator and base point dimensions differ");
  }
  const Eigen::MatrixXd& s = m.entries();
  const double scale = s.norm();
  if ((s * base.coords()).norm() > 1e-9 * scale + 1e-300) {
    throw Error(ErrorKind::kInvalidArgument,
                "operator does not annihilate the base point; not a tangent covariance");
  }
  TangentBasis basis = tangent_basis(base);
  Eigen::MatrixXd reduced = basis.axes.transpose() * s * basis.axes;
  reduced = 0.5 * (reduced + reduced.transpose());
  SymmetricEigen eigen = jacobi_eigen(reduced);
  return TangentSpectrum{std::move(basis), std::move(eigen)};
}

void require_full_rank(const Eigen::VectorXd& values) {
  const double largest = values[0];
  const double smallest = values[values.size() - 1];
  if (!(largest > 0.0) || smallest <= kRankTolerance * largest) {
    throw Error(ErrorKind::kRankDeficient,
                "tangent covariance is rank deficient (data on a sub-sphere?)");
  }
}

SpdShape lift(const TangentSpectrum& spec, const Eigen::VectorXd& diag) {
  const Eigen::MatrixXd coords =
      spec.eigen.vectors * diag.asDiagonal() * spec.eigen.vectors.transpose();
  Eigen::MatrixXd ambient = spec.basis.axes * coords * spec.basis.axes.transpose();
  ambient = 0.5 * (ambient + ambient.transpose());
  return SpdShape(std::move(ambient), spec.basis.base);
}

}  // namespace

SpdShape::SpdShape(Eigen::MatrixXd entries, std::optional<UnitVector> null_direction)
    : entries_(std::move(entries)), null_direction_(std::move(null_direction)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw Error(ErrorKind::kInvalidArgument, "shape operator must be square");
  }
  if (!entries_.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "shape operator has non-finite entries");
  }
  const double scale = operator_scale(entries_);
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorKind::kInvalidArgument, "shape operator is not symmetric");
  }
  if (null_direction_) {
    if (null_direction_->dim() != entries_.rows()) {
      throw Error(ErrorKind::kInvalidArgument, "null direction dimension mismatch");
    }
    if ((entries_ * null_direction_->coords()).norm() > 1e-9 * entries_.norm() + 1e-300) {
      throw Error(ErrorKind::kInvalidArgument, "null direction is not in the null space");
    }
  }
  if (scale > 0.0) {
    const SymmetricEigen eig = jacobi_eigen(entries_);
    const double norm2 = std::max(std::abs(eig.values[0]),
                                  std::abs(eig.values[eig.values.size() - 1]));
    if (eig.values[eig.values.size() - 1] < -1e-10 * norm2) {
      throw Error(ErrorKind::kInvalidArgument, "shape operator is not positive semi-definite");
    }
  }
}

SpdShape SpdShape::tangent_identity(const UnitVector& mu) {
  const int d = mu.dim();
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d) - mu.coords() * mu.coords().transpose();
  return SpdShape(0.5 * (p + p.transpose()), mu);
}

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols() || n < 1) {
    throw Error(ErrorKind::kInvalidArgument, "eigen-decomposition needs a square matrix");
  }
  Eigen::MatrixXd a = 0.5 * (m + m.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  auto off_diagonal = [&a, n] {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return s;
  };

  const double total = a.squaredNorm();
  bool converged = n == 1 || total == 0.0;
  for (int sweep = 0; sweep < kJacobiSweepBudget && !converged; ++sweep) {
    const double off = off_diagonal();
    if (off <= 1e-32 * total) {
      converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation annihilating a(p,q) (Golub & Van Loan, sym.schur2).
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (off_diagonal() <= 1e-32 * total) converged = true;
  }
  if (!converged) {
    throw Error(ErrorKind::kConvergenceFailure, "Jacobi sweep budget exhausted");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymmetricEigen out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values[k] = a(src, src);
    Eigen::VectorXd col = v.col(src);
    Eigen::Index lead = 0;
    for (Eigen::Index i = 1; i < n; ++i) {
      if (std::abs(col[i]) > std::abs(col[lead])) lead = i;
    }
    if (col[lead] < 0.0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

SymmetricEigen sym_eigen(const SpdShape& m) { return jacobi_eigen(m.entries()); }

double spectral_norm(const SpdShape& m) {
  const SymmetricEigen eig = sym_eigen(m);
  return std::max(std::abs(eig.values[0]), std::abs(eig.values[eig.values.size() - 1]));
}

Eigen::VectorXd tangent_eigenvalues(const SpdShape& m, const UnitVector& base) {
  return tangent_spectrum(m, base).eigen.values;
}

SpdShape normalized_inv_sqrt(const SpdShape& m, const UnitVector& base) {
  const TangentSpectrum spec = tangent_spectrum(m, base);
  const Eigen::VectorXd& lambda = spec.eigen.values;
  require_full_rank(lambda);
  // lambda^{-1/2} / lambda_min^{-1/2}: the largest entry is exactly 1.
  const double smallest = lambda[lambda.size() - 1];
  Eigen::VectorXd diag = (smallest / lambda.array()).sqrt().matrix();
  diag[diag.size() - 1] = 1.0;
  return lift(spec, diag);
}

SpdShape normalized_sqrt(const SpdShape& m, const UnitVector& base) {
  const TangentSpectrum spec = tangent_spectrum(m, base);
  const Eigen::VectorXd& lambda = spec.eigen.values;
  require_full_rank(lambda);
  const double smallest = lambda[lambda.size() - 1];
  Eigen::VectorXd diag = (lambda.array() / smallest).sqrt().matrix();
  diag[diag.size() - 1] = 1.0;
  return lift(spec, diag);
}

}  // namespace dirquant
