#include "dirquant/sample.hpp"

#include <string>

#include "dirquant/error.hpp"

namespace dirquant {

DirectionalSample::DirectionalSample(int dim, std::string source)
    : dim_(dim), source_(std::move(source)) {
  if (dim < 2) throw Error(ErrorKind::kInvalidArgument, "sample dimension must be >= 2");
}

DirectionalSample::DirectionalSample(std::vector<UnitVector> points, std::string source)
    : dim_(0), points_(std::move(points)), source_(std::move(source)) {
  if (points_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "cannot infer the dimension of an empty sample");
  }
  dim_ = points_.front().dim();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].dim() != dim_) {
      throw Error(ErrorKind::kInvalidArgument, "mixed dimensions in sample", i);
    }
  }
}

void DirectionalSample::push_back(UnitVector point) {
  if (point.dim() != dim_) {
    throw Error(ErrorKind::kInvalidArgument,
                "point of dimension " + std::to_string(point.dim()) +
                    " added to a sample of dimension " + std::to_string(dim_),
                points_.size());
  }
  points_.push_back(std::move(point));
}

std::vector<double> DirectionalSample::projections(const UnitVector& mu) const {
  if (mu.dim() != dim_) {
    throw Error(ErrorKind::kInvalidArgument, "projection direction dimension mismatch");
  }
  std::vector<double> out;
  out.reserve(points_.size());
  for (const UnitVector& x : points_) out.push_back(x.dot(mu));
  return out;
}

}  // namespace dirquant
