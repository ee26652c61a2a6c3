#pragma once

#include <cstdint>
#include <random>

namespace dirquant {

// splitmix64 finalizer: a bijective 64-bit avalanche.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Seed of the `index`-th independent stream spawned from `base`:
// mix_seed(base ^ index).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Explicit random stream handed to every sampler.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// derives uniforms and normals with its own arithmetic, so a given seed
/// produces the same doubles on every conforming platform. The library never
/// reads ambient randomness. Streams are move-only: one per thread.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream(const RandomStream&) = delete;
  RandomStream& operator=(const RandomStream&) = delete;
  RandomStream(RandomStream&&) noexcept = default;
  RandomStream& operator=(RandomStream&&) noexcept = default;

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  // Standard normal (Box-Muller, both variates used).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dirquant
