#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iirofdm/mapping.hpp"
#include "iirofdm/modem.hpp"

namespace iirofdm::harness {

enum class OutputFormat { Csv, Json };

// Everything a run needs, as supplied by flags or a JSON config file.
struct ExperimentConfig {
  Eigen::Index n = 64;
  Eigen::Index guard = 2;
  Coefficients a;  // defaults to 1 - 0.8 z^-1 + 0.15 z^-2, see default_config()
  Coefficients b;  // defaults to 1
  std::string modulation = "qpsk";
  std::vector<double> snr_db = {0.0, 4.0, 8.0};
  long trials = 40;
  Eigen::Index symbols = 20;  // OFDM symbols per frame (one frame per trial)
  std::uint64_t seed = 1;
  std::vector<double> epsilons = {0.0, 1e-4, 1e-3, 1e-2};
  bool allow_unstable = false;
  std::string out;  // empty = stdout
  OutputFormat format = OutputFormat::Csv;
};

ExperimentConfig default_config();

// Validated, ready-to-run objects. Throws ConfigError / ChannelError /
// GainSingularError with distinct diagnostics.
struct ValidatedSetup {
  OfdmConfig cfg;
  RationalChannel channel;
  SubcarrierGains gains;
  Constellation constellation;
};

ValidatedSetup validate(const ExperimentConfig& ec);

// One report row. `x` is the sweep variable (snr_db or epsilon). A nonempty
// `error` marks a row whose perturbed setup failed validation; its numeric
// fields are NaN and counts are zero.
struct ReportRecord {
  double x = 0.0;
  long trials = 0;
  long long bits = 0;
  long long bit_errors = 0;
  double ber = 0.0;
  double evm_rms = 0.0;
  std::optional<double> analytic_ber;
  double avg_tx_power = 0.0;
  double avg_rx_power = 0.0;
  std::string error;
};

struct SimReport {
  std::string x_column = "snr_db";
  std::vector<ReportRecord> records;
  double max_spectral_error = 0.0;  // roundtrip/sensitivity diagnostic
};

// Noiseless end-to-end run: random payload -> modulate -> channel ->
// demodulate. Reports the largest |Xhat - X| across the run.
SimReport run_roundtrip(const ExperimentConfig& ec);

// Monte Carlo BER sweep over the configured SNR points. Noise enters at the
// receiver input, referenced to the measured channel-output power. For QPSK
// the report carries the analytic per-subcarrier Q-function average.
SimReport run_ber_sweep(const ExperimentConfig& ec);

// Coefficient-error sweep: the transmitter modulates with perturbed
// coefficients a'(k) = a(k)(1 + eps * delta_k), delta_k a fixed
// unit-magnitude complex drawn from the seed; the channel and the receiver
// use the true coefficients. Noiseless.
SimReport run_sensitivity(const ExperimentConfig& ec);

// Conventional CP-OFDM over the same rational channel, equalized with the
// truncated impulse response (first G+1 taps).
SimReport run_baseline(const ExperimentConfig& ec);

// Gain/stability diagnosis; never fails on singular gains, it reports them.
struct InspectReport {
  Eigen::Index n = 0;
  Eigen::Index guard = 0;
  Eigen::Index guard_required = 0;
  bool stable = false;
  double margin = 1e-6;
  double tol = 1e-9;
  Coefficients a, b;
  Eigen::VectorXd abs_a_k, abs_b_k;
  std::vector<Eigen::Index> singular_a, singular_b;
};

InspectReport inspect(const ExperimentConfig& ec);
std::string format_inspect_text(const InspectReport& r);
std::string format_inspect_csv(const InspectReport& r);
std::string format_inspect_json(const InspectReport& r);

// Analytic QPSK bit error rate for this receiver: (1/N) sum_k Q(d / sigma_k)
// with d = 1/sqrt(2) and per-component deviation
// sigma_k^2 = |A_k/B_k|^2 * N * noise_variance / 2.
double analytic_qpsk_ber(const SubcarrierGains& gains, double noise_variance);

// Gaussian tail probability Q(x).
double q_function(double x);

// Serialization. CSV column order is fixed:
// <x>,trials,bits,bit_errors,ber,evm_rms,analytic_ber,avg_tx_power,avg_rx_power
std::string to_csv(const SimReport& report);
std::string to_json_string(const SimReport& report);

// Writes to ec.out (or stdout when empty) in ec.format.
void write_report(const SimReport& report, const ExperimentConfig& ec);

}  // namespace iirofdm::harness
