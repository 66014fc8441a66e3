#pragma once

#include <optional>
#include <vector>

#include "iirofdm/channel.hpp"

namespace iirofdm {

// OFDM dimensions: N subcarriers and guard/CP length G, with N > G >= 1.
class OfdmConfig {
 public:
  OfdmConfig(Eigen::Index n, Eigen::Index g);

  Eigen::Index n() const { return n_; }
  Eigen::Index g() const { return g_; }
  Eigen::Index period() const { return n_ + g_; }

 private:
  Eigen::Index n_;
  Eigen::Index g_;
};

// One modulated burst of M symbols.
//
// Stream layout, period P = N + G (all indices within symbol i's period):
//
//   transmit x : | guard xbar^i (G) | c^i_G .. c^i_{N-1} | c^i_0 .. c^i_{G-1} |
//   receive  y : | y^i_0 ...................... y^i_{N-1} | y^i_0 .. y^i_{G-1} |
//
// where y^i = inverse_dft(X^i / A_k), c^i = inverse_dft(X^i) is the
// conventional OFDM symbol (it appears rotated left by G), and the guard is
// synthesized from a(k) and the neighboring y blocks so that filtering x by
// A(z) reproduces the CP-bearing receive stream exactly.
struct TxFrame {
  std::vector<ComplexBlock> spectra;   // information spectra X^i
  std::vector<ComplexBlock> y_blocks;  // y^i the receiver must observe
  std::vector<ComplexBlock> guards;    // synthesized guards, length G each
  SampleStream stream;                 // M*(N+G) transmitted samples
};

struct RxResult {
  std::vector<ComplexBlock> spectra_hat;  // recovered spectra Xhat^i
  std::optional<double> evm_rms;          // set when a reference was supplied
};

// Guard interval placed ahead of y_curr's block so the channel output grows
// a cyclic prefix:
//   xbar_n = sum_{k=0}^{n} a(k) y_curr_{n-k} + sum_{k=n+1}^{g} a(k) y_prev_{n+g-k}
// for n = 0..g-1, with a zero-extended to degree g. An empty y_prev stands
// for the all-zero block before the first symbol.
ComplexBlock compute_guard(const ComplexBlock& y_prev, const ComplexBlock& y_curr,
                           const Coefficients& a, Eigen::Index g);

// Suffix-CP layout: every block is followed by a copy of its own first g
// samples. g = 0 is allowed here (plain concatenation) for oracle use.
SampleStream build_cp_stream(const std::vector<ComplexBlock>& y_blocks, Eigen::Index g);

// Builds the transmit frame for the channel denominator a: solves
// y^i = inverse_dft(X^i / A_k), chains the guards with y^{-1} = 0, and
// assembles the stream in the layout above. Does not read the channel
// numerator B(z).
TxFrame modulate_frame(const OfdmConfig& cfg, const SubcarrierGains& gains,
                       const Coefficients& a, const std::vector<ComplexBlock>& spectra);

// Receiver framing and per-subcarrier inversion: for each symbol the N
// samples starting at i*P+G are un-rotated by G, transformed, and multiplied
// by A_k / B_k. The G samples at the start of each period are discarded, the
// same as CP removal.
RxResult demodulate_frame(const OfdmConfig& cfg, const SubcarrierGains& gains,
                          const SampleStream& rx, Eigen::Index m,
                          const std::vector<ComplexBlock>* reference = nullptr);

// Conventional CP-OFDM baseline: prefix-CP layout
// [last G samples of inverse_dft(X^i)] ++ inverse_dft(X^i).
SampleStream conventional_modulate(const OfdmConfig& cfg,
                                   const std::vector<ComplexBlock>& spectra);

// Conventional receiver: drops each prefix, transforms, and divides by the
// FIR gains unit_circle_eval(taps, N).
RxResult conventional_demodulate(const OfdmConfig& cfg, const Coefficients& taps,
                                 const SampleStream& rx, Eigen::Index m,
                                 const std::vector<ComplexBlock>* reference = nullptr);

// RMS of (estimate - reference) normalized by the RMS of the reference,
// taken over all symbols and subcarriers.
double evm_rms(const std::vector<ComplexBlock>& estimate,
               const std::vector<ComplexBlock>& reference);

}  // namespace iirofdm
