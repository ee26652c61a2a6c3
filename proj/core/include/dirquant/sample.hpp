#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dirquant/sphere_geometry.hpp"

namespace dirquant {

/// Ordered observations on S^{d-1}, all of one dimension.
///
/// Samplers and readers always produce n >= 1; empty samples only arise as
/// the removed (or kept) part of a trim.
class DirectionalSample {
 public:
  explicit DirectionalSample(int dim, std::string source = {});
  explicit DirectionalSample(std::vector<UnitVector> points, std::string source = {});

  void push_back(UnitVector point);
  void reserve(std::size_t n) { points_.reserve(n); }

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  const UnitVector& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<UnitVector>& points() const noexcept { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  bool hemisphere_folded() const noexcept { return hemisphere_folded_; }
  void set_hemisphere_folded(bool folded) noexcept { hemisphere_folded_ = folded; }
  const std::string& source() const noexcept { return source_; }
  void set_source(std::string source) { source_ = std::move(source); }

  // x_i . mu for every point, in sample order.
  std::vector<double> projections(const UnitVector& mu) const;

 private:
  int dim_;
  std::vector<UnitVector> points_;
  bool hemisphere_folded_ = false;
  std::string source_;
};

}  // namespace dirquant
