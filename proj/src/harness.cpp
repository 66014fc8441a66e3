#include "iirofdm/harness.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "iirofdm/errors.hpp"

namespace iirofdm::harness {

using Eigen::Index;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Index salts for deriving independent random streams from the master seed.
constexpr std::uint64_t kTrialStream = 0;
constexpr std::uint64_t kDeltaStream = 0x64656c7461;  // sensitivity perturbation draws

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t point, std::uint64_t trial) {
  return stable_hash(stable_hash(stable_hash(master, kTrialStream), point), trial);
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig ec;
  ec.a.resize(3);
  ec.a << Complex{1.0, 0.0}, Complex{-0.8, 0.0}, Complex{0.15, 0.0};
  ec.b.resize(1);
  ec.b << Complex{1.0, 0.0};
  return ec;
}

ValidatedSetup validate(const ExperimentConfig& ec) {
  if (ec.trials < 1) throw ConfigError("trials must be positive");
  if (ec.symbols < 1) throw ConfigError("symbols per frame must be positive");
  OfdmConfig cfg(ec.n, ec.guard);  // distinct diagnostics for G < 1 and N <= G
  RationalChannel ch = make_channel(ec.a, ec.b);
  const Index need = guard_requirement(ch);
  if (ec.guard < need) {
    throw ConfigError("guard length G=" + std::to_string(ec.guard) +
                      " is smaller than the channel order requirement max(Ga,Gb)=" +
                      std::to_string(need));
  }
  if (!ec.allow_unstable && !is_stable(ch.a)) {
    throw ChannelError(
        "denominator A(z) has a root on or outside the unit circle; "
        "pass --allow-unstable for short-stream experiments");
  }
  SubcarrierGains gains = subcarrier_gains(ch, ec.n);
  Constellation constellation = make_constellation(ec.modulation);
  return ValidatedSetup{cfg, ch, gains, constellation};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double analytic_qpsk_ber(const SubcarrierGains& gains, double noise_variance) {
  if (!(noise_variance > 0.0)) return 0.0;
  const double n = static_cast<double>(gains.n);
  const double d = 1.0 / std::numbers::sqrt2;
  double acc = 0.0;
  for (Index k = 0; k < gains.n; ++k) {
    const double amp = std::abs(gains.a_k(k) / gains.b_k(k));
    const double sigma_k = amp * std::sqrt(n * noise_variance / 2.0);
    acc += q_function(d / sigma_k);
  }
  return acc / n;
}

namespace {

struct PointAccumulator {
  long trials = 0;
  long long bits = 0;
  long long bit_errors = 0;
  double evm_num = 0.0;
  double evm_den = 0.0;
  double tx_power = 0.0;
  double rx_power = 0.0;
  double analytic_sum = 0.0;
  bool analytic_defined = false;
  double max_spectral_error = 0.0;

  ReportRecord record(double x) const {
    ReportRecord r;
    r.x = x;
    r.trials = trials;
    r.bits = bits;
    r.bit_errors = bit_errors;
    r.ber = bits > 0 ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0;
    r.evm_rms = evm_den > 0.0 ? std::sqrt(evm_num / evm_den) : 0.0;
    if (analytic_defined) r.analytic_ber = analytic_sum / static_cast<double>(trials);
    r.avg_tx_power = tx_power / static_cast<double>(trials);
    r.avg_rx_power = rx_power / static_cast<double>(trials);
    return r;
  }
};

struct PointParams {
  double snr_db = kInf;
  const SubcarrierGains* tx_gains = nullptr;  // transmitter's belief
  const Coefficients* tx_a = nullptr;         // transmitter's denominator
  bool conventional = false;
  Coefficients eq_taps;  // baseline equalizer
};

// One Monte Carlo point: `trials` independent frames through the channel.
PointAccumulator simulate_point(const ValidatedSetup& s, const ExperimentConfig& ec,
                                const PointParams& p, std::uint64_t point_index) {
  PointAccumulator acc;
  const Index n = s.cfg.n();
  const Index m = ec.symbols;
  const int bps = s.constellation.bits_per_symbol;
  const bool qpsk = s.constellation.name == "qpsk";

  for (long t = 0; t < ec.trials; ++t) {
    RandomSource rng(trial_seed(ec.seed, point_index, static_cast<std::uint64_t>(t)));

    BitSequence bits(static_cast<std::size_t>(m * n) * static_cast<std::size_t>(bps));
    for (auto& bit : bits) bit = static_cast<std::uint8_t>(rng.bit());
    const Eigen::VectorXcd symbols = map_bits(s.constellation, bits);
    std::vector<ComplexBlock> spectra(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) spectra[static_cast<std::size_t>(i)] = symbols.segment(i * n, n);

    SampleStream tx;
    if (p.conventional) {
      tx = conventional_modulate(s.cfg, spectra);
    } else {
      tx = modulate_frame(s.cfg, *p.tx_gains, *p.tx_a, spectra).stream;
    }
    const SampleStream rx_clean = apply_rational(s.channel, tx);
    const SampleStream rx = add_awgn(rx_clean, p.snr_db, rng);

    RxResult res = p.conventional
                       ? conventional_demodulate(s.cfg, p.eq_taps, rx, m, &spectra)
                       : demodulate_frame(s.cfg, s.gains, rx, m, &spectra);

    Eigen::VectorXcd flat(m * n);
    for (Index i = 0; i < m; ++i) flat.segment(i * n, n) = res.spectra_hat[static_cast<std::size_t>(i)];
    const BitSequence bits_hat = demap_hard(s.constellation, flat);

    acc.trials += 1;
    acc.bits += static_cast<long long>(bits.size());
    acc.bit_errors += static_cast<long long>(count_bit_errors(bits, bits_hat));
    for (Index i = 0; i < m; ++i) {
      const ComplexBlock diff = res.spectra_hat[static_cast<std::size_t>(i)] - spectra[static_cast<std::size_t>(i)];
      acc.evm_num += diff.squaredNorm();
      acc.evm_den += spectra[static_cast<std::size_t>(i)].squaredNorm();
      acc.max_spectral_error = std::max(acc.max_spectral_error, diff.cwiseAbs().maxCoeff());
    }
    const double tx_p = tx.squaredNorm() / static_cast<double>(tx.size());
    const double rx_p = rx_clean.squaredNorm() / static_cast<double>(rx_clean.size());
    acc.tx_power += tx_p;
    acc.rx_power += rx_p;
    if (qpsk && !p.conventional) {
      acc.analytic_defined = true;
      const double sigma2 =
          std::isinf(p.snr_db) ? 0.0 : rx_p * std::pow(10.0, -p.snr_db / 10.0);
      acc.analytic_sum += analytic_qpsk_ber(s.gains, sigma2);
    }
  }
  return acc;
}

}  // namespace

SimReport run_roundtrip(const ExperimentConfig& ec) {
  const ValidatedSetup s = validate(ec);
  PointParams p;
  p.snr_db = kInf;
  p.tx_gains = &s.gains;
  p.tx_a = &s.channel.a;
  const PointAccumulator acc = simulate_point(s, ec, p, 0);
  SimReport report;
  report.x_column = "snr_db";
  report.records.push_back(acc.record(kInf));
  report.max_spectral_error = acc.max_spectral_error;
  return report;
}

SimReport run_ber_sweep(const ExperimentConfig& ec) {
  const ValidatedSetup s = validate(ec);
  if (ec.snr_db.empty()) throw ConfigError("ber sweep needs at least one SNR point");
  SimReport report;
  report.x_column = "snr_db";
  for (std::size_t pi = 0; pi < ec.snr_db.size(); ++pi) {
    PointParams p;
    p.snr_db = ec.snr_db[pi];
    p.tx_gains = &s.gains;
    p.tx_a = &s.channel.a;
    const PointAccumulator acc = simulate_point(s, ec, p, pi);
    report.records.push_back(acc.record(ec.snr_db[pi]));
    report.max_spectral_error = std::max(report.max_spectral_error, acc.max_spectral_error);
  }
  return report;
}

SimReport run_baseline(const ExperimentConfig& ec) {
  const ValidatedSetup s = validate(ec);
  if (ec.snr_db.empty()) throw ConfigError("baseline sweep needs at least one SNR point");
  SimReport report;
  report.x_column = "snr_db";
  PointParams p;
  p.conventional = true;
  // the receiver an FIR-channel design would use: the impulse response
  // truncated to the CP budget
  p.eq_taps = impulse_response(s.channel, ec.guard + 1);
  for (std::size_t pi = 0; pi < ec.snr_db.size(); ++pi) {
    p.snr_db = ec.snr_db[pi];
    const PointAccumulator acc = simulate_point(s, ec, p, pi);
    report.records.push_back(acc.record(ec.snr_db[pi]));
    report.max_spectral_error = std::max(report.max_spectral_error, acc.max_spectral_error);
  }
  return report;
}

SimReport run_sensitivity(const ExperimentConfig& ec) {
  const ValidatedSetup s = validate(ec);
  if (ec.epsilons.empty()) throw ConfigError("sensitivity sweep needs at least one epsilon");

  // One fixed unit-magnitude direction per coefficient, shared by all rows so
  // epsilon is the only thing that varies.
  RandomSource delta_rng(stable_hash(ec.seed, kDeltaStream));
  Coefficients delta(s.channel.a.size());
  for (Index k = 0; k < delta.size(); ++k) {
    delta(k) = std::polar(1.0, 2.0 * std::numbers::pi * delta_rng.uniform01());
  }

  SimReport report;
  report.x_column = "epsilon";
  for (std::size_t pi = 0; pi < ec.epsilons.size(); ++pi) {
    const double eps = ec.epsilons[pi];
    Coefficients a_tx(s.channel.a.size());
    for (Index k = 0; k < a_tx.size(); ++k) {
      a_tx(k) = s.channel.a(k) * (1.0 + eps * delta(k));
    }

    ReportRecord row;
    row.x = eps;
    try {
      if (!ec.allow_unstable && !is_stable(a_tx)) {
        throw ChannelError("perturbed A(z) is unstable");
      }
      const RationalChannel perturbed = make_channel(a_tx, s.channel.b);
      const SubcarrierGains tx_gains = subcarrier_gains(perturbed, ec.n);
      PointParams p;
      p.snr_db = kInf;
      p.tx_gains = &tx_gains;
      p.tx_a = &perturbed.a;
      const PointAccumulator acc = simulate_point(s, ec, p, pi);
      row = acc.record(eps);
      row.analytic_ber.reset();  // noiseless sweep, not a BER experiment
      report.max_spectral_error = std::max(report.max_spectral_error, acc.max_spectral_error);
    } catch (const ModemError& e) {
      row.error = e.what();
      row.ber = kNan;
      row.evm_rms = kNan;
      row.avg_tx_power = kNan;
      row.avg_rx_power = kNan;
    }
    report.records.push_back(std::move(row));
  }
  return report;
}

InspectReport inspect(const ExperimentConfig& ec) {
  if (ec.n < 2) throw ConfigError("subcarrier count N must be at least 2");
  const RationalChannel ch = make_channel(ec.a, ec.b);
  InspectReport r;
  r.n = ec.n;
  r.guard = ec.guard;
  r.guard_required = guard_requirement(ch);
  r.stable = is_stable(ch.a, r.margin);
  r.a = ch.a;
  r.b = ch.b;
  const ComplexBlock a_k = unit_circle_eval(ch.a, ec.n);
  const ComplexBlock b_k = unit_circle_eval(ch.b, ec.n);
  r.abs_a_k = a_k.cwiseAbs();
  r.abs_b_k = b_k.cwiseAbs();
  for (Index k = 0; k < ec.n; ++k) {
    if (r.abs_a_k(k) < r.tol * r.abs_a_k.maxCoeff()) r.singular_a.push_back(k);
    if (r.abs_b_k(k) < r.tol * r.abs_b_k.maxCoeff()) r.singular_b.push_back(k);
  }
  return r;
}

}  // namespace iirofdm::harness
