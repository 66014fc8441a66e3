#include "iirofdm/rng.hpp"

#include <cmath>
#include <numbers>

namespace iirofdm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index + 0x9e3779b97f4a7c15ULL));
}

double RandomSource::uniform01() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomSource::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  // log1p(-u1) = log(1 - u1) stays finite for u1 in [0, 1)
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

std::complex<double> RandomSource::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

}  // namespace iirofdm
