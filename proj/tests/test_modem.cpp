#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "iirofdm/errors.hpp"
#include "iirofdm/modem.hpp"
#include "oracles.hpp"

using namespace iirofdm;
using testutil::max_abs_diff;
using testutil::random_unit_spectra;
using Eigen::Index;

namespace {

Coefficients coeffs(std::initializer_list<Complex> values) {
  Coefficients out(static_cast<Index>(values.size()));
  Index i = 0;
  for (const Complex& v : values) out(i++) = v;
  return out;
}

ComplexBlock rotated_left(const ComplexBlock& v, Index s) {
  ComplexBlock out(v.size());
  out.head(v.size() - s) = v.tail(v.size() - s);
  out.tail(s) = v.head(s);
  return out;
}

ComplexBlock zero_extended(const Coefficients& c, Index n) {
  ComplexBlock out = ComplexBlock::Zero(n);
  out.head(c.size()) = c;
  return out;
}

bool bitwise_equal(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  if (x.size() != y.size()) return false;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != y(i)) return false;
  }
  return true;
}

// Ground truth for the whole construction: the transmit stream must be the
// linear A(z) filtering of the CP-bearing receive stream.
SampleStream stream_filter_oracle(const Coefficients& a, const std::vector<ComplexBlock>& y_blocks,
                                  Index g) {
  return fir_filter(a, build_cp_stream(y_blocks, g));
}

}  // namespace

TEST_CASE("OfdmConfig enforces N > G >= 1 with distinct diagnostics") {
  CHECK_NOTHROW(OfdmConfig(8, 2));
  CHECK_THROWS_WITH_AS(OfdmConfig(8, 0), doctest::Contains("at least 1"), ConfigError);
  CHECK_THROWS_WITH_AS(OfdmConfig(4, 4), doctest::Contains("must exceed"), ConfigError);
  CHECK_THROWS_WITH_AS(OfdmConfig(4, 9), doctest::Contains("must exceed"), ConfigError);
}

TEST_CASE("compute_guard matches the closed form") {
  ComplexBlock y_prev(4), y_curr(4);
  y_prev << 1, 0, 0, 0;
  y_curr << 0, 1, 0, 0;

  // zero-order A: the guard is the plain next sample
  CHECK(max_abs_diff(compute_guard(y_prev, y_curr, coeffs({1}), 1), y_curr.head(1)) == 0.0);

  // n = 0 term: a(0) y_curr_0 + a(1) y_prev_0
  const ComplexBlock guard = compute_guard(y_prev, y_curr, coeffs({1, 0.5}), 1);
  CHECK(guard.size() == 1);
  CHECK(std::abs(guard(0) - Complex{0.5, 0.0}) < 1e-15);

  // first-symbol boundary: empty y_prev acts as the zero block
  RandomSource rng(5);
  ComplexBlock y(6);
  for (Index i = 0; i < 6; ++i) y(i) = rng.complex_gaussian();
  const Coefficients a = coeffs({1, -0.4, 0.1});
  const ComplexBlock g0 = compute_guard(ComplexBlock(), y, a, 2);
  for (Index n = 0; n < 2; ++n) {
    Complex expect{0.0, 0.0};
    for (Index k = 0; k <= n; ++k) expect += a(k) * y(n - k);
    CHECK(std::abs(g0(n) - expect) < 1e-15);
  }

  CHECK_THROWS_AS(compute_guard(y_prev, y_curr, coeffs({1}), 4), ConfigError);       // g >= N
  CHECK_THROWS_AS(compute_guard(y_prev, y_curr, coeffs({1, 1, 1}), 1), ConfigError); // deg > g
}

TEST_CASE("build_cp_stream copies each block's head after the block") {
  ComplexBlock y(4);
  y << 1, 2, 3, 4;
  SampleStream expected(6);
  expected << 1, 2, 3, 4, 1, 2;
  CHECK(max_abs_diff(build_cp_stream({y}, 2), expected) == 0.0);

  // degenerate g = 0 stays available for oracle use
  CHECK(max_abs_diff(build_cp_stream({y}, 0), y) == 0.0);

  ComplexBlock z(4);
  z << 5, 6, 7, 8;
  SampleStream two(10);
  two << 1, 2, 3, 4, 1, 5, 6, 7, 8, 5;
  CHECK(max_abs_diff(build_cp_stream({y, z}, 1), two) == 0.0);

  CHECK_THROWS_AS(build_cp_stream({y}, 4), ConfigError);
}

TEST_CASE("identity channel: guards copy the head of the current block") {
  const OfdmConfig cfg(8, 1);
  const RationalChannel ch = make_channel(coeffs({1}), coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, 8);
  RandomSource rng(9);
  const auto spectra = random_unit_spectra(rng, 3, 8);
  const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(max_abs_diff(frame.y_blocks[i], inverse_dft(spectra[i])) == 0.0);
    CHECK(bitwise_equal(frame.guards[i], frame.y_blocks[i].head(1)));
  }
}

TEST_CASE("an impulse y block lays the coefficients bare in the stream") {
  // X = forward_dft(zero-extended a) makes y the unit impulse
  const Index n = 8;
  const Coefficients a = coeffs({1, -0.6, 0.2});
  const Index g = 2;
  const OfdmConfig cfg(n, g);
  const RationalChannel ch = make_channel(a, coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, n);
  const std::vector<ComplexBlock> spectra{forward_dft(zero_extended(a, n))};
  const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);

  ComplexBlock impulse = ComplexBlock::Zero(n);
  impulse(0) = 1;
  CHECK(max_abs_diff(frame.y_blocks[0], impulse) < 1e-14);
  CHECK(max_abs_diff(frame.guards[0], a.head(g)) < 1e-13);
  CHECK(max_abs_diff(frame.stream, stream_filter_oracle(a, frame.y_blocks, g)) < 1e-12);
  // the payload region is the zero-extended coefficient list, rotated by G
  CHECK(max_abs_diff(frame.stream.segment(g, n), rotated_left(zero_extended(a, n), g)) < 1e-13);
}

TEST_CASE("construction equivalence: block-built stream equals the filtered CP stream") {
  RandomSource rng(1234);
  int cases = 0;
  for (Index n : {Index{8}, Index{64}}) {
    for (Index ga = 1; ga <= 6; ++ga) {
      for (Index g = ga; g <= std::min(ga + 2, n - 1); ++g) {
        for (Index m : {Index{1}, Index{2}, Index{5}}) {
          const Coefficients a = testutil::random_stable_a(rng, ga);
          const RationalChannel ch = make_channel(a, coeffs({1}));
          const SubcarrierGains gains = subcarrier_gains(ch, n);
          const OfdmConfig cfg(n, g);
          const auto spectra = random_unit_spectra(rng, m, n);
          const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
          const SampleStream oracle = stream_filter_oracle(ch.a, frame.y_blocks, g);
          CHECK(max_abs_diff(frame.stream, oracle) < 1e-12);
          ++cases;
        }
      }
    }
  }
  CHECK(cases >= 100);
}

TEST_CASE("noiseless recovery is exact over random stable channels") {
  RandomSource rng(4321);
  for (Index n : {Index{8}, Index{12}, Index{64}}) {  // 12 exercises the direct transform path
    for (Index ga = 1; ga <= 6; ++ga) {
      const Index g = std::min(ga + Index(rng.next() % 3), n - 1);
      const Index m = 1 + Index(rng.next() % 5);
      const Coefficients a = testutil::random_stable_a(rng, ga);

      // pure channel
      const RationalChannel pure = make_channel(a, coeffs({1}));
      const SubcarrierGains pure_gains = subcarrier_gains(pure, n);
      const OfdmConfig cfg(n, g);
      const auto spectra = random_unit_spectra(rng, m, n);
      const TxFrame f1 = modulate_frame(cfg, pure_gains, pure.a, spectra);
      const RxResult r1 = demodulate_frame(cfg, pure_gains, apply_rational(pure, f1.stream), m, &spectra);
      CHECK(*r1.evm_rms < 1e-9);

      // mixed channel with a random numerator of degree <= G
      Coefficients b(g + 1);
      b(0) = 1.0;
      for (Index k = 1; k <= g; ++k) b(k) = 0.3 * rng.complex_gaussian();
      const RationalChannel mixed = make_channel(a, b);
      const SubcarrierGains mixed_gains = subcarrier_gains(mixed, n);
      const TxFrame f2 = modulate_frame(cfg, mixed_gains, mixed.a, spectra);
      const RxResult r2 =
          demodulate_frame(cfg, mixed_gains, apply_rational(mixed, f2.stream), m, &spectra);
      CHECK(*r2.evm_rms < 1e-9);
    }
  }
}

TEST_CASE("pure IIR channel: noiseless recovery is exact") {
  const OfdmConfig cfg(64, 2);
  const RationalChannel ch = make_channel(coeffs({1, -0.8, 0.15}), coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, 64);
  RandomSource rng(21);
  const auto spectra = random_unit_spectra(rng, 20, 64);
  const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
  const SampleStream rx = apply_rational(ch, frame.stream);
  const RxResult res = demodulate_frame(cfg, gains, rx, 20, &spectra);
  for (Index i = 0; i < 20; ++i) {
    CHECK(max_abs_diff(res.spectra_hat[static_cast<std::size_t>(i)],
                       spectra[static_cast<std::size_t>(i)]) < 1e-9);
  }
  CHECK(*res.evm_rms < 1e-9);
}

TEST_CASE("mixed channel: recovery is exact and the stream ignores B(z)") {
  const OfdmConfig cfg(64, 3);
  const Coefficients a = coeffs({1, -0.8, 0.15});
  const RationalChannel pure = make_channel(a, coeffs({1}));
  const RationalChannel mixed = make_channel(a, coeffs({1, 0.4, 0, -0.1}));
  const SubcarrierGains pure_gains = subcarrier_gains(pure, 64);
  const SubcarrierGains mixed_gains = subcarrier_gains(mixed, 64);

  RandomSource rng(22);
  const auto spectra = random_unit_spectra(rng, 10, 64);
  const TxFrame f1 = modulate_frame(cfg, pure_gains, pure.a, spectra);
  const TxFrame f2 = modulate_frame(cfg, mixed_gains, mixed.a, spectra);
  CHECK(bitwise_equal(f1.stream, f2.stream));  // guards never read B(z)

  const SampleStream rx = apply_rational(mixed, f2.stream);
  const RxResult res = demodulate_frame(cfg, mixed_gains, rx, 10, &spectra);
  CHECK(*res.evm_rms < 1e-9);
  for (const auto& i : {0, 9}) {
    CHECK(max_abs_diff(res.spectra_hat[static_cast<std::size_t>(i)],
                       spectra[static_cast<std::size_t>(i)]) < 1e-9);
  }
}

TEST_CASE("discarded receiver samples follow the numerator's guard formula") {
  const Index n = 16;
  const Index g = 3;
  const OfdmConfig cfg(n, g);
  const Coefficients a = coeffs({1, -0.5, 0.1});
  const Coefficients b = coeffs({1, 0.4, -0.2});
  const RationalChannel ch = make_channel(a, b);
  const SubcarrierGains gains = subcarrier_gains(ch, n);
  RandomSource rng(23);
  const Index m = 4;
  const auto spectra = random_unit_spectra(rng, m, n);
  const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
  const SampleStream rx = apply_rational(ch, frame.stream);

  // ubar_n = sum_{k<=n} b(k) y_curr_{n-k} + sum_{k>n} b(k) y_prev_{n+g-k}
  for (Index i = 0; i < m; ++i) {
    for (Index idx = 0; idx < g; ++idx) {
      Complex expect{0.0, 0.0};
      for (Index k = 0; k <= g; ++k) {
        const Complex bk = k < b.size() ? b(k) : Complex{0.0, 0.0};
        if (k <= idx) {
          expect += bk * frame.y_blocks[static_cast<std::size_t>(i)](idx - k);
        } else if (i > 0) {
          expect += bk * frame.y_blocks[static_cast<std::size_t>(i - 1)](idx + g - k);
        }
      }
      CHECK(std::abs(rx(i * cfg.period() + idx) - expect) < 1e-10);
    }
  }
}

TEST_CASE("subchannel isolation: one active subcarrier never leaks") {
  const Index n = 32;
  const OfdmConfig cfg(n, 2);
  const RationalChannel ch = make_channel(coeffs({1, -0.8, 0.15}), coeffs({1, 0.4}));
  const SubcarrierGains gains = subcarrier_gains(ch, n);
  for (Index k : {Index{0}, Index{5}, Index{16}, Index{31}}) {
    ComplexBlock e_k = ComplexBlock::Zero(n);
    e_k(k) = 1;
    const std::vector<ComplexBlock> spectra{e_k};
    const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
    const SampleStream rx = apply_rational(ch, frame.stream);
    const RxResult res = demodulate_frame(cfg, gains, rx, 1);
    CHECK_FALSE(res.evm_rms.has_value());
    for (Index other = 0; other < n; ++other) {
      if (other != k) CHECK(std::abs(res.spectra_hat[0](other)) < 1e-10);
    }
    CHECK(std::abs(res.spectra_hat[0](k) - Complex{1.0, 0.0}) < 1e-10);
  }
}

TEST_CASE("payload samples are exactly the rotated conventional symbol") {
  const Index n = 16;
  const Index g = 4;
  const OfdmConfig cfg(n, g);
  const Coefficients a = coeffs({1, -0.7, 0.1, 0, 0.05});
  const RationalChannel ch = make_channel(a, coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, n);
  RandomSource rng(31);
  const Index m = 3;
  const auto spectra = random_unit_spectra(rng, m, n);
  const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
  for (Index i = 0; i < m; ++i) {
    const ComplexBlock payload = frame.stream.segment(i * cfg.period() + g, n);
    const ComplexBlock symbol = inverse_dft(spectra[static_cast<std::size_t>(i)]);
    CHECK(bitwise_equal(payload, rotated_left(symbol, g)));

    auto as_sorted = [](const ComplexBlock& v) {
      std::vector<std::pair<double, double>> out;
      for (Index t = 0; t < v.size(); ++t) out.emplace_back(v(t).real(), v(t).imag());
      std::sort(out.begin(), out.end());
      return out;
    };
    CHECK(as_sorted(payload) == as_sorted(symbol));
  }
}

TEST_CASE("identity channel recovers spectra at numerical precision") {
  const OfdmConfig cfg(16, 1);
  const RationalChannel ch = make_channel(coeffs({1}), coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, 16);
  RandomSource rng(33);
  const auto spectra = random_unit_spectra(rng, 1, 16);
  const TxFrame frame = modulate_frame(cfg, gains, ch.a, spectra);
  const SampleStream rx = apply_rational(ch, frame.stream);
  const RxResult res = demodulate_frame(cfg, gains, rx, 1, &spectra);
  CHECK(max_abs_diff(res.spectra_hat[0], spectra[0]) < 1e-12);
}

TEST_CASE("demodulate_frame rejects short streams") {
  const OfdmConfig cfg(8, 2);
  const RationalChannel ch = make_channel(coeffs({1}), coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, 8);
  CHECK_THROWS_AS(demodulate_frame(cfg, gains, SampleStream::Zero(19), 2), SizeError);
  CHECK_THROWS_AS(demodulate_frame(cfg, gains, SampleStream::Zero(19), 0), SizeError);
}

TEST_CASE("modulate_frame validates shapes and guard budget") {
  const OfdmConfig cfg(8, 1);
  const RationalChannel ch = make_channel(coeffs({1, -0.5, 0.2}), coeffs({1}));
  const SubcarrierGains gains = subcarrier_gains(ch, 8);
  RandomSource rng(35);
  // order of A(z) exceeds G
  CHECK_THROWS_AS(modulate_frame(cfg, gains, ch.a, random_unit_spectra(rng, 1, 8)), ConfigError);
  // mismatched spectrum length
  const OfdmConfig cfg2(8, 2);
  CHECK_THROWS_AS(modulate_frame(cfg2, gains, ch.a, random_unit_spectra(rng, 1, 4)), ConfigError);
  // gains computed for a different N
  const SubcarrierGains wrong = subcarrier_gains(ch, 16);
  CHECK_THROWS_AS(modulate_frame(cfg2, wrong, ch.a, random_unit_spectra(rng, 1, 8)), ConfigError);
}

TEST_CASE("conventional CP-OFDM recovers exactly over a short FIR channel") {
  const OfdmConfig cfg(64, 1);
  const Coefficients b = coeffs({1, 0.4});
  const RationalChannel ch = make_channel(coeffs({1}), b);
  RandomSource rng(41);
  const Index m = 8;
  const auto spectra = random_unit_spectra(rng, m, 64);
  const SampleStream tx = conventional_modulate(cfg, spectra);
  const SampleStream rx = apply_rational(ch, tx);
  const RxResult res = conventional_demodulate(cfg, b, rx, m, &spectra);
  CHECK(*res.evm_rms < 1e-9);

  // identity channel, trivially exact
  const RxResult id = conventional_demodulate(cfg, coeffs({1}), tx, m, &spectra);
  const RationalChannel identity = make_channel(coeffs({1}), coeffs({1}));
  const SampleStream rx_id = apply_rational(identity, tx);
  const RxResult id2 = conventional_demodulate(cfg, coeffs({1}), rx_id, m, &spectra);
  CHECK(*id2.evm_rms < 1e-12);
  CHECK(*id.evm_rms < 1e-12);
}

TEST_CASE("conventional CP-OFDM fails on the IIR channel it cannot shorten") {
  const Index g = 4;
  const OfdmConfig cfg(64, g);
  const RationalChannel ch = make_channel(coeffs({1, -0.8}), coeffs({1}));
  RandomSource rng(43);
  const Index m = 30;
  const auto spectra = random_unit_spectra(rng, m, 64);
  const SampleStream tx = conventional_modulate(cfg, spectra);
  const SampleStream rx = apply_rational(ch, tx);
  const ComplexBlock taps = impulse_response(ch, g + 1);  // 0.8^t, truncated
  const RxResult res = conventional_demodulate(cfg, taps, rx, m, &spectra);
  CHECK(*res.evm_rms > 1e-2);

  // the proposed scheme handles the same channel with a single guard sample
  const OfdmConfig tight(64, 1);
  const SubcarrierGains gains = subcarrier_gains(ch, 64);
  const TxFrame frame = modulate_frame(tight, gains, ch.a, spectra);
  const RxResult ours = demodulate_frame(tight, gains, apply_rational(ch, frame.stream), m, &spectra);
  CHECK(*ours.evm_rms < 1e-9);

  CHECK_THROWS_AS(conventional_demodulate(cfg, impulse_response(ch, g + 2), rx, m), ConfigError);
}

TEST_CASE("evm_rms basics") {
  ComplexBlock x(2);
  x << 1, Complex{0, 1};
  CHECK(evm_rms({x}, {x}) == 0.0);
  ComplexBlock y = x;
  y(0) += 0.1;
  CHECK(evm_rms({y}, {x}) == doctest::Approx(0.1 / std::sqrt(2.0)));
  CHECK_THROWS_AS(evm_rms({x}, {x, y}), SizeError);
}
