#include "iirofdm/modem.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "iirofdm/errors.hpp"

namespace iirofdm {

using Eigen::Index;

OfdmConfig::OfdmConfig(Index n, Index g) : n_(n), g_(g) {
  if (g < 1) throw ConfigError("guard length G must be at least 1, got " + std::to_string(g));
  if (n <= g) {
    throw ConfigError("subcarrier count N must exceed the guard length G (N=" + std::to_string(n) +
                      ", G=" + std::to_string(g) + ")");
  }
}

namespace {

// [v_s, ..., v_{N-1}, v_0, ..., v_{s-1}]
ComplexBlock rotate_left(const ComplexBlock& v, Index s) {
  const Index n = v.size();
  ComplexBlock out(n);
  out.head(n - s) = v.tail(n - s);
  out.tail(s) = v.head(s);
  return out;
}

void require_symbols(const std::vector<ComplexBlock>& spectra) {
  if (spectra.empty()) throw ConfigError("frame needs at least one symbol");
}

}  // namespace

ComplexBlock compute_guard(const ComplexBlock& y_prev, const ComplexBlock& y_curr,
                           const Coefficients& a, Index g) {
  const Index n = y_curr.size();
  if (g >= n) {
    throw ConfigError("guard length G=" + std::to_string(g) + " must be below the block length N=" +
                      std::to_string(n));
  }
  if (a.size() < 1) throw ChannelError("empty coefficient list");
  if (a.size() > g + 1) {
    throw ConfigError("guard length G=" + std::to_string(g) +
                      " is smaller than the filter degree " + std::to_string(a.size() - 1));
  }
  const bool have_prev = y_prev.size() != 0;
  if (have_prev && y_prev.size() != n) {
    throw SizeError("previous and current blocks differ in length");
  }
  ComplexBlock guard(g);
  for (Index i = 0; i < g; ++i) {
    Complex acc{0.0, 0.0};
    for (Index k = 0; k < a.size(); ++k) {
      if (k <= i) {
        acc += a(k) * y_curr(i - k);
      } else if (have_prev) {
        acc += a(k) * y_prev(i + g - k);
      }
    }
    guard(i) = acc;
  }
  return guard;
}

SampleStream build_cp_stream(const std::vector<ComplexBlock>& y_blocks, Index g) {
  require_symbols(y_blocks);
  const Index n = y_blocks.front().size();
  if (g < 0 || g >= n) {
    throw ConfigError("CP length g=" + std::to_string(g) + " must lie in [0, N) with N=" +
                      std::to_string(n));
  }
  const Index period = n + g;
  SampleStream out(static_cast<Index>(y_blocks.size()) * period);
  for (std::size_t i = 0; i < y_blocks.size(); ++i) {
    if (y_blocks[i].size() != n) throw SizeError("blocks differ in length");
    out.segment(static_cast<Index>(i) * period, n) = y_blocks[i];
    out.segment(static_cast<Index>(i) * period + n, g) = y_blocks[i].head(g);
  }
  return out;
}

TxFrame modulate_frame(const OfdmConfig& cfg, const SubcarrierGains& gains,
                       const Coefficients& a, const std::vector<ComplexBlock>& spectra) {
  require_symbols(spectra);
  const Index n = cfg.n();
  const Index g = cfg.g();
  if (gains.n != n) {
    throw ConfigError("gains were computed for N=" + std::to_string(gains.n) +
                      ", frame uses N=" + std::to_string(n));
  }
  if (a.size() - 1 > g) {
    throw ConfigError("guard length G=" + std::to_string(g) +
                      " is smaller than the order of A(z), " + std::to_string(a.size() - 1));
  }

  TxFrame frame;
  frame.spectra = spectra;
  frame.y_blocks.reserve(spectra.size());
  frame.guards.reserve(spectra.size());
  frame.stream.resize(static_cast<Index>(spectra.size()) * cfg.period());

  const ComplexBlock zero_prehistory;
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    if (spectra[i].size() != n) {
      throw ConfigError("spectrum " + std::to_string(i) + " has length " +
                        std::to_string(spectra[i].size()) + ", expected N=" + std::to_string(n));
    }
    ComplexBlock y = inverse_dft((spectra[i].array() / gains.a_k.array()).matrix());
    const ComplexBlock& y_prev = i == 0 ? zero_prehistory : frame.y_blocks[i - 1];
    ComplexBlock guard = compute_guard(y_prev, y, a, g);
    ComplexBlock payload = inverse_dft(spectra[i]);  // conventional symbol c^i

    const Index base = static_cast<Index>(i) * cfg.period();
    frame.stream.segment(base, g) = guard;
    frame.stream.segment(base + g, n) = rotate_left(payload, g);
    frame.y_blocks.push_back(std::move(y));
    frame.guards.push_back(std::move(guard));
  }
  return frame;
}

RxResult demodulate_frame(const OfdmConfig& cfg, const SubcarrierGains& gains,
                          const SampleStream& rx, Index m,
                          const std::vector<ComplexBlock>* reference) {
  const Index n = cfg.n();
  const Index g = cfg.g();
  if (gains.n != n) {
    throw ConfigError("gains were computed for N=" + std::to_string(gains.n) +
                      ", frame uses N=" + std::to_string(n));
  }
  if (m < 1) throw SizeError("symbol count must be positive");
  if (rx.size() < m * cfg.period()) {
    throw SizeError("receive stream too short: " + std::to_string(rx.size()) + " < " +
                    std::to_string(m * cfg.period()));
  }
  RxResult res;
  res.spectra_hat.reserve(static_cast<std::size_t>(m));
  const Eigen::ArrayXcd equalizer = gains.a_k.array() / gains.b_k.array();
  for (Index i = 0; i < m; ++i) {
    // window past the discarded samples, then undo the payload rotation
    ComplexBlock window = rx.segment(i * cfg.period() + g, n);
    ComplexBlock block = rotate_left(window, n - g);
    ComplexBlock u = forward_dft(block);
    res.spectra_hat.push_back((u.array() * equalizer).matrix());
  }
  if (reference) res.evm_rms = evm_rms(res.spectra_hat, *reference);
  return res;
}

SampleStream conventional_modulate(const OfdmConfig& cfg,
                                   const std::vector<ComplexBlock>& spectra) {
  require_symbols(spectra);
  const Index n = cfg.n();
  const Index g = cfg.g();
  SampleStream out(static_cast<Index>(spectra.size()) * cfg.period());
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    if (spectra[i].size() != n) {
      throw ConfigError("spectrum " + std::to_string(i) + " has length " +
                        std::to_string(spectra[i].size()) + ", expected N=" + std::to_string(n));
    }
    ComplexBlock symbol = inverse_dft(spectra[i]);
    const Index base = static_cast<Index>(i) * cfg.period();
    out.segment(base, g) = symbol.tail(g);
    out.segment(base + g, n) = symbol;
  }
  return out;
}

RxResult conventional_demodulate(const OfdmConfig& cfg, const Coefficients& taps,
                                 const SampleStream& rx, Index m,
                                 const std::vector<ComplexBlock>* reference) {
  const Index n = cfg.n();
  const Index g = cfg.g();
  if (taps.size() - 1 > g) {
    throw ConfigError("equalizer taps exceed the CP length: degree " +
                      std::to_string(taps.size() - 1) + " > G=" + std::to_string(g));
  }
  if (m < 1) throw SizeError("symbol count must be positive");
  if (rx.size() < m * cfg.period()) {
    throw SizeError("receive stream too short: " + std::to_string(rx.size()) + " < " +
                    std::to_string(m * cfg.period()));
  }
  const ComplexBlock h_k = unit_circle_eval(taps, n);
  RxResult res;
  res.spectra_hat.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    ComplexBlock window = rx.segment(i * cfg.period() + g, n);
    ComplexBlock u = forward_dft(window);
    res.spectra_hat.push_back((u.array() / h_k.array()).matrix());
  }
  if (reference) res.evm_rms = evm_rms(res.spectra_hat, *reference);
  return res;
}

double evm_rms(const std::vector<ComplexBlock>& estimate,
               const std::vector<ComplexBlock>& reference) {
  if (estimate.size() != reference.size()) {
    throw SizeError("estimate and reference differ in symbol count");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    if (estimate[i].size() != reference[i].size()) {
      throw SizeError("estimate and reference differ in block length");
    }
    num += (estimate[i] - reference[i]).squaredNorm();
    den += reference[i].squaredNorm();
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

}  // namespace iirofdm
