#include "iirofdm/channel.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "iirofdm/errors.hpp"

namespace iirofdm {

using Eigen::Index;

namespace {

void require_denominator(const Coefficients& a) {
  if (a.size() < 1) throw ChannelError("denominator coefficient list is empty");
  if (a(0) == Complex{0.0, 0.0}) {
    throw ChannelError("denominator leading coefficient a(0) must be nonzero");
  }
}

}  // namespace

RationalChannel make_channel(const Coefficients& a, const Coefficients& b) {
  require_denominator(a);
  if (b.size() < 1) throw ChannelError("numerator coefficient list is empty");
  RationalChannel ch;
  ch.a = a / a(0);
  ch.b = b / a(0);
  return ch;
}

Index guard_requirement(const RationalChannel& ch) { return std::max(ch.ga(), ch.gb()); }

bool is_stable(const Coefficients& a, double margin) {
  require_denominator(a);
  if (!(margin >= 0.0 && margin < 1.0)) {
    throw ChannelError("stability margin must lie in [0, 1)");
  }
  const Index deg = a.size() - 1;
  if (deg == 0) return true;

  // Substituting w -> (1 - margin) w maps "all roots inside radius 1-margin"
  // onto the plain unit-circle test; monic coefficients of the scaled
  // polynomial are (a(k)/a(0)) (1-margin)^{-k}.
  const double rho = 1.0 - margin;
  std::vector<Complex> cur(static_cast<std::size_t>(deg) + 1);
  cur[0] = {1.0, 0.0};
  double scale = 1.0;
  for (Index k = 1; k <= deg; ++k) {
    scale /= rho;
    cur[static_cast<std::size_t>(k)] = (a(k) / a(0)) * scale;
  }

  // Levinson step-down: stable iff every reflection coefficient (the trailing
  // coefficient at each degree) has magnitude strictly below one.
  for (Index m = deg; m >= 1; --m) {
    const Complex km = cur[static_cast<std::size_t>(m)];
    if (std::norm(km) >= 1.0) return false;
    if (m == 1) break;
    const double denom = 1.0 - std::norm(km);
    std::vector<Complex> next(static_cast<std::size_t>(m));
    next[0] = {1.0, 0.0};
    for (Index i = 1; i < m; ++i) {
      next[static_cast<std::size_t>(i)] =
          (cur[static_cast<std::size_t>(i)] - km * std::conj(cur[static_cast<std::size_t>(m - i)])) /
          denom;
    }
    cur = std::move(next);
  }
  return true;
}

SampleStream apply_rational(const RationalChannel& ch, const SampleStream& input) {
  const Index len = input.size();
  const Index ga = ch.ga();
  const Index gb = ch.gb();
  SampleStream out(len);
  for (Index t = 0; t < len; ++t) {
    Complex acc{0.0, 0.0};
    for (Index k = 0; k <= std::min(gb, t); ++k) acc += ch.b(k) * input(t - k);
    for (Index k = 1; k <= std::min(ga, t); ++k) acc -= ch.a(k) * out(t - k);
    out(t) = acc;  // a(0) == 1 by construction
  }
  return out;
}

SampleStream fir_filter(const Coefficients& taps, const SampleStream& input) {
  if (taps.size() < 1) throw SizeError("fir_filter needs at least one tap");
  const Index len = input.size();
  const Index deg = taps.size() - 1;
  SampleStream out(len);
  for (Index t = 0; t < len; ++t) {
    Complex acc{0.0, 0.0};
    for (Index k = 0; k <= std::min(deg, t); ++k) acc += taps(k) * input(t - k);
    out(t) = acc;
  }
  return out;
}

ComplexBlock impulse_response(const RationalChannel& ch, Index length) {
  if (length < 1) throw SizeError("impulse_response needs a positive length");
  SampleStream impulse = SampleStream::Zero(length);
  impulse(0) = {1.0, 0.0};
  return apply_rational(ch, impulse);
}

namespace {

void check_gains(const ComplexBlock& gains, double tol, const char* which) {
  Index worst = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (Index k = 0; k < gains.size(); ++k) {
    const double mag = std::abs(gains(k));
    if (mag < lo) {
      lo = mag;
      worst = k;
    }
    hi = std::max(hi, mag);
  }
  if (lo < tol * hi) throw GainSingularError(which, worst, lo);
}

}  // namespace

SubcarrierGains subcarrier_gains(const RationalChannel& ch, Index n, double tol) {
  if (n < 2) throw SizeError("subcarrier_gains needs n >= 2");
  SubcarrierGains g;
  g.n = n;
  g.a_k = unit_circle_eval(ch.a, n);
  g.b_k = unit_circle_eval(ch.b, n);
  check_gains(g.a_k, tol, "A(z)");
  check_gains(g.b_k, tol, "B(z)");
  return g;
}

SampleStream add_awgn(const SampleStream& input, double snr_db, RandomSource& rng) {
  if (input.size() < 1) throw SizeError("add_awgn needs a non-empty stream");
  if (snr_db == std::numeric_limits<double>::infinity()) return input;
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db must be finite or +inf");
  const double p_in = input.squaredNorm() / static_cast<double>(input.size());
  const double sigma2 = p_in * std::pow(10.0, -snr_db / 10.0);
  const double component_dev = std::sqrt(sigma2 / 2.0);
  SampleStream out(input.size());
  for (Index t = 0; t < input.size(); ++t) {
    out(t) = input(t) + Complex{component_dev * rng.gaussian(), component_dev * rng.gaussian()};
  }
  return out;
}

}  // namespace iirofdm
