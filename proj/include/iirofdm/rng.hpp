#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace iirofdm {

// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent child seed from a master seed and an index. Used so
// Monte Carlo trials own disjoint random streams regardless of run order.
std::uint64_t stable_hash(std::uint64_t seed, std::uint64_t index);

// Deterministic random source. Uniforms come from the top 53 bits of
// mt19937_64 outputs and gaussians from the Box-Muller transform, so the
// stream produced by a seed is identical across standard libraries.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }
  int bit() { return static_cast<int>(gen_() & 1u); }

  // Uniform in [0, 1).
  double uniform01();

  // Standard normal.
  double gaussian();

  // Circularly symmetric complex normal with E|z|^2 = 1.
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace iirofdm
