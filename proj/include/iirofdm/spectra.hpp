#pragma once

#include <Eigen/Core>

#include <complex>

namespace iirofdm {

using Complex = std::complex<double>;

// A length-N block of complex baseband samples. The same dense type carries
// serialized sample streams and polynomial coefficient lists.
using ComplexBlock = Eigen::VectorXcd;
using SampleStream = Eigen::VectorXcd;
using Coefficients = Eigen::VectorXcd;

// Forward N-point transform, X_k = sum_n x_n W^{nk} with W = exp(-j 2 pi / N).
// The forward sum is unnormalized; inverse_dft carries the 1/N factor.
// Radix-2 when N is a power of two, direct O(N^2) evaluation otherwise.
ComplexBlock forward_dft(const ComplexBlock& block);

// Exact inverse of forward_dft: x_n = (1/N) sum_k X_k W^{-nk}.
ComplexBlock inverse_dft(const ComplexBlock& spectrum);

// N-point cyclic convolution, out_n = sum_k taps_k block_{(n-k) mod N}.
// Taps shorter than the block are zero-extended; longer taps are rejected.
ComplexBlock cyclic_convolve(const Coefficients& taps, const ComplexBlock& block);

// Evaluates G_k = sum_n coeffs_n W^{nk} at the n_points-th roots of unity for
// k = 0..n_points-1: the per-subcarrier gains of a polynomial in z^{-1}.
ComplexBlock unit_circle_eval(const Coefficients& coeffs, Eigen::Index n_points);

namespace detail {

bool is_power_of_two(Eigen::Index n);

// Direct O(N^2) evaluation of the forward sum.
ComplexBlock dft_direct(const ComplexBlock& block);

// Iterative radix-2 decimation-in-time; N must be a power of two.
ComplexBlock dft_radix2(const ComplexBlock& block);

}  // namespace detail

}  // namespace iirofdm
