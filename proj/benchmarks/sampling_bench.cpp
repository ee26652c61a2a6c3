#include <benchmark/benchmark.h>

#include "dirquant/distributions.hpp"
#include "dirquant/random.hpp"

namespace {

using namespace dirquant;

void BM_VmfSample(benchmark::State& state) {
  const VmfParams p(UnitVector::basis(3, 2), 7.0);
  RandomStream rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(vmf_sample(p, 200, rng));
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_VmfSample);

// Designs l = 1..4 of the replication study.
void BM_KentSample(benchmark::State& state) {
  static const double kappa[] = {5, 7, 10, 12};
  static const double beta[] = {2, 3, 4, 5};
  const auto l = state.range(0) - 1;
  const KentParams p = KentParams::canonical(kappa[l], beta[l]);
  RandomStream rng(6);
  SamplerStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(kent_sample(p, 200, rng, &stats));
  state.SetItemsProcessed(state.iterations() * 200);
  state.counters["acceptance"] = stats.acceptance_rate();
}
BENCHMARK(BM_KentSample)->DenseRange(1, 4);

}  // namespace
