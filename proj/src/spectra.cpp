#include "iirofdm/spectra.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "iirofdm/errors.hpp"

namespace iirofdm {

using Eigen::Index;

namespace detail {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

ComplexBlock dft_direct(const ComplexBlock& x) {
  const Index n = x.size();
  // one table of exact roots of unity, indexed by (n'*k) mod n
  std::vector<Complex> w(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    w[static_cast<std::size_t>(m)] =
        std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
  }
  ComplexBlock out(n);
  for (Index k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (Index i = 0; i < n; ++i) {
      acc += x(i) * w[static_cast<std::size_t>((i * k) % n)];
    }
    out(k) = acc;
  }
  return out;
}

ComplexBlock dft_radix2(const ComplexBlock& x) {
  const Index n = x.size();
  ComplexBlock out = x;
  for (Index i = 1, j = 0; i < n; ++i) {
    Index bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(out(i), out(j));
  }
  for (Index len = 2; len <= n; len <<= 1) {
    const Index half = len >> 1;
    for (Index j = 0; j < half; ++j) {
      const Complex w =
          std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(len));
      for (Index start = 0; start < n; start += len) {
        const Complex t = out(start + j + half) * w;
        out(start + j + half) = out(start + j) - t;
        out(start + j) += t;
      }
    }
  }
  return out;
}

}  // namespace detail

namespace {

void require_block_size(const ComplexBlock& x) {
  if (x.size() < 2) {
    throw SizeError("transform requires a block of at least 2 samples, got " +
                    std::to_string(x.size()));
  }
}

}  // namespace

ComplexBlock forward_dft(const ComplexBlock& block) {
  require_block_size(block);
  return detail::is_power_of_two(block.size()) ? detail::dft_radix2(block)
                                               : detail::dft_direct(block);
}

ComplexBlock inverse_dft(const ComplexBlock& spectrum) {
  require_block_size(spectrum);
  ComplexBlock out = forward_dft(spectrum.conjugate());
  return out.conjugate() / static_cast<double>(spectrum.size());
}

ComplexBlock cyclic_convolve(const Coefficients& taps, const ComplexBlock& block) {
  const Index n = block.size();
  if (taps.size() < 1) throw SizeError("cyclic_convolve needs at least one tap");
  if (taps.size() > n) {
    throw SizeError("cyclic_convolve taps longer than the block: " + std::to_string(taps.size()) +
                    " > " + std::to_string(n));
  }
  ComplexBlock out(n);
  for (Index i = 0; i < n; ++i) {
    Complex acc{0.0, 0.0};
    for (Index k = 0; k < taps.size(); ++k) {
      Index idx = i - k;
      if (idx < 0) idx += n;
      acc += taps(k) * block(idx);
    }
    out(i) = acc;
  }
  return out;
}

ComplexBlock unit_circle_eval(const Coefficients& coeffs, Index n_points) {
  if (coeffs.size() < 1) throw ChannelError("empty coefficient list");
  if (n_points < 2) {
    throw SizeError("unit_circle_eval needs at least 2 points, got " + std::to_string(n_points));
  }
  std::vector<Complex> w(static_cast<std::size_t>(n_points));
  for (Index m = 0; m < n_points; ++m) {
    w[static_cast<std::size_t>(m)] = std::polar(
        1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n_points));
  }
  ComplexBlock out(n_points);
  for (Index k = 0; k < n_points; ++k) {
    Complex acc{0.0, 0.0};
    for (Index i = 0; i < coeffs.size(); ++i) {
      acc += coeffs(i) * w[static_cast<std::size_t>((i * k) % n_points)];
    }
    out(k) = acc;
  }
  return out;
}

}  // namespace iirofdm
