#pragma once

#include "iirofdm/rng.hpp"
#include "iirofdm/spectra.hpp"

namespace iirofdm {

// Rational channel B(z)/A(z), stored with a(0) normalized to 1.
// The pure IIR channel 1/A(z) is b = [1].
struct RationalChannel {
  Coefficients a;  // denominator coefficients a(0..Ga), a(0) == 1
  Coefficients b;  // numerator coefficients b(0..Gb)

  Eigen::Index ga() const { return a.size() - 1; }
  Eigen::Index gb() const { return b.size() - 1; }
};

// Validates and normalizes the coefficient lists (both rescaled by 1/a(0)).
RationalChannel make_channel(const Coefficients& a, const Coefficients& b);

// Smallest admissible guard/CP length for this channel: max(deg A, deg B).
Eigen::Index guard_requirement(const RationalChannel& ch);

// True iff every root of sum_k a(k) z^{Ga-k} has magnitude <= 1 - margin,
// decided by the Schur-Cohn/Jury step-down recursion on the coefficients
// (no root extraction). Complex coefficients are supported.
bool is_stable(const Coefficients& a, double margin = 1e-6);

// Runs the channel's difference equation over the input with zero prehistory:
//   a(0) u_t = sum_{k=0}^{Gb} b(k) x_{t-k} - sum_{k=1}^{Ga} a(k) u_{t-k}.
// Output length equals input length.
SampleStream apply_rational(const RationalChannel& ch, const SampleStream& input);

// Linear convolution with the taps, truncated to the input length, zero
// prehistory.
SampleStream fir_filter(const Coefficients& taps, const SampleStream& input);

// First `length` samples of the channel's impulse response.
ComplexBlock impulse_response(const RationalChannel& ch, Eigen::Index length);

// The unit-circle evaluations A_k and B_k of the channel polynomials.
struct SubcarrierGains {
  ComplexBlock a_k;
  ComplexBlock b_k;
  Eigen::Index n = 0;
};

// Computes the gains for an N-subcarrier system. Fails with a gain-singular
// error if any |A_k| (or |B_k|) falls below tol times the largest magnitude
// of its own polynomial's gains; the tolerance is relative so it is
// scale-free.
SubcarrierGains subcarrier_gains(const RationalChannel& ch, Eigen::Index n, double tol = 1e-9);

// Adds circularly symmetric complex Gaussian noise with per-sample variance
// sigma^2 = P_in / 10^(snr_db/10), where P_in is the empirical mean power of
// the input stream. snr_db = +infinity is the no-noise sentinel. Deterministic
// given the random source's seed.
SampleStream add_awgn(const SampleStream& input, double snr_db, RandomSource& rng);

}  // namespace iirofdm
