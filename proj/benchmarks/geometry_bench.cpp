#include <vector>

#include <benchmark/benchmark.h>

#include "dirquant/matrix_ops.hpp"
#include "dirquant/random.hpp"
#include "dirquant/sphere_geometry.hpp"

namespace {

using namespace dirquant;

std::vector<UnitVector> random_points(int dim, std::size_t n, RandomStream& rng) {
  std::vector<UnitVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd v(dim);
    for (int k = 0; k < dim; ++k) v[k] = rng.normal();
    out.push_back(UnitVector::normalized(v));
  }
  return out;
}

void BM_LogExpRoundtrip(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  RandomStream rng(1);
  const UnitVector mu = random_points(dim, 1, rng).front();
  auto points = random_points(dim, 1024, rng);
  std::size_t i = 0;
  for (auto _ : state) {
    const UnitVector& x = points[i++ & 1023];
    if (x.dot(mu) < -0.999) continue;
    benchmark::DoNotOptimize(exp_map(log_map(mu, x)));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LogExpRoundtrip)->Arg(3)->Arg(10);

void BM_TangentBasis(benchmark::State& state) {
  RandomStream rng(2);
  auto points = random_points(static_cast<int>(state.range(0)), 256, rng);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(tangent_basis(points[i++ & 255]));
}
BENCHMARK(BM_TangentBasis)->Arg(3)->Arg(10);

void BM_JacobiEigen(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  RandomStream rng(3);
  Eigen::MatrixXd g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = rng.normal();
  const Eigen::MatrixXd m = g * g.transpose();
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(m));
}
BENCHMARK(BM_JacobiEigen)->Arg(3)->Arg(8)->Arg(20);

}  // namespace
