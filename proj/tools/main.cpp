#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "iirofdm/complexio.hpp"
#include "iirofdm/errors.hpp"
#include "iirofdm/harness.hpp"

namespace {

using iirofdm::harness::ExperimentConfig;
using iirofdm::harness::OutputFormat;

// Flag values as strings; lists stay unparsed until the config file has been
// merged in (flags override file values, file values override defaults).
struct RawOptions {
  std::int64_t n = 64;
  std::int64_t guard = 2;
  std::string a = "1,-0.8,0.15";
  std::string b = "1";
  std::string mod = "qpsk";
  std::string snr_db = "0,4,8";
  std::int64_t trials = 40;
  std::int64_t symbols = 20;
  std::uint64_t seed = 1;
  std::string epsilon = "0,1e-4,1e-3,1e-2";
  bool allow_unstable = false;
  std::string out;
  std::string format = "csv";
  std::string config_path;
};

void add_common_options(CLI::App* sub, RawOptions* raw) {
  sub->add_option("--n", raw->n, "Subcarrier count N");
  sub->add_option("--guard", raw->guard, "Guard/CP length G");
  sub->add_option("--a", raw->a, "Denominator coefficients, comma separated (complex as re+imj)");
  sub->add_option("--b", raw->b, "Numerator coefficients");
  sub->add_option("--mod", raw->mod, "Modulation: qpsk or qam16");
  sub->add_option("--snr-db", raw->snr_db, "SNR points in dB, comma separated (inf = noiseless)");
  sub->add_option("--trials", raw->trials, "Monte Carlo trials per point");
  sub->add_option("--symbols", raw->symbols, "OFDM symbols per frame");
  sub->add_option("--seed", raw->seed, "Master seed");
  sub->add_option("--epsilon", raw->epsilon, "Relative coefficient error magnitudes (sensitivity)");
  sub->add_flag("--allow-unstable", raw->allow_unstable, "Run even if A(z) is unstable");
  sub->add_option("--out", raw->out, "Output path (default: stdout)");
  sub->add_option("--format", raw->format, "Output format: csv or json");
  sub->add_option("--config", raw->config_path, "JSON config file mirroring these flags");
}

// Applies config-file values for every flag the command line left untouched.
void merge_config_file(const CLI::App* sub, RawOptions* raw) {
  std::ifstream file(raw->config_path);
  if (!file) throw iirofdm::ConfigError("cannot open config file '" + raw->config_path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw iirofdm::ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw iirofdm::ConfigError("config file must hold a JSON object");

  auto untouched = [&](const char* flag) { return sub->count(flag) == 0; };
  auto as_list_string = [](const nlohmann::json& v, const char* key) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      std::string joined;
      for (const auto& item : v) {
        if (!joined.empty()) joined += ',';
        if (item.is_string()) {
          joined += item.get<std::string>();
        } else if (item.is_number()) {
          joined += iirofdm::format_double(item.get<double>());
        } else {
          throw iirofdm::ConfigError(std::string("config key '") + key +
                                     "' must hold numbers or strings");
        }
      }
      return joined;
    }
    if (v.is_number()) return iirofdm::format_double(v.get<double>());
    throw iirofdm::ConfigError(std::string("config key '") + key + "' must be a string or array");
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "n" && untouched("--n")) {
      raw->n = value.get<std::int64_t>();
    } else if (key == "guard" && untouched("--guard")) {
      raw->guard = value.get<std::int64_t>();
    } else if (key == "a" && untouched("--a")) {
      raw->a = as_list_string(value, "a");
    } else if (key == "b" && untouched("--b")) {
      raw->b = as_list_string(value, "b");
    } else if (key == "mod" && untouched("--mod")) {
      raw->mod = value.get<std::string>();
    } else if (key == "snr_db" && untouched("--snr-db")) {
      raw->snr_db = as_list_string(value, "snr_db");
    } else if (key == "trials" && untouched("--trials")) {
      raw->trials = value.get<std::int64_t>();
    } else if (key == "symbols" && untouched("--symbols")) {
      raw->symbols = value.get<std::int64_t>();
    } else if (key == "seed" && untouched("--seed")) {
      raw->seed = value.get<std::uint64_t>();
    } else if (key == "epsilon" && untouched("--epsilon")) {
      raw->epsilon = as_list_string(value, "epsilon");
    } else if (key == "allow_unstable" && untouched("--allow-unstable")) {
      raw->allow_unstable = value.get<bool>();
    } else if (key == "out" && untouched("--out")) {
      raw->out = value.get<std::string>();
    } else if (key == "format" && untouched("--format")) {
      raw->format = value.get<std::string>();
    } else if (key == "n" || key == "guard" || key == "a" || key == "b" || key == "mod" ||
               key == "snr_db" || key == "trials" || key == "symbols" || key == "seed" ||
               key == "epsilon" || key == "allow_unstable" || key == "out" || key == "format") {
      // flag on the command line wins
    } else {
      throw iirofdm::ConfigError("unknown config key '" + key + "'");
    }
  }
}

ExperimentConfig build_config(const RawOptions& raw) {
  ExperimentConfig ec;
  ec.n = raw.n;
  ec.guard = raw.guard;
  ec.a = iirofdm::parse_complex_list(raw.a);
  ec.b = iirofdm::parse_complex_list(raw.b);
  ec.modulation = raw.mod;
  ec.snr_db = iirofdm::parse_double_list(raw.snr_db);
  ec.trials = raw.trials;
  ec.symbols = raw.symbols;
  ec.seed = raw.seed;
  ec.epsilons = iirofdm::parse_double_list(raw.epsilon);
  ec.allow_unstable = raw.allow_unstable;
  ec.out = raw.out;
  if (raw.format == "csv") {
    ec.format = OutputFormat::Csv;
  } else if (raw.format == "json") {
    ec.format = OutputFormat::Json;
  } else {
    throw iirofdm::ConfigError("unknown format '" + raw.format + "' (expected csv or json)");
  }
  return ec;
}

void write_inspect(const iirofdm::harness::InspectReport& rep, const ExperimentConfig& ec) {
  std::string body;
  if (!ec.out.empty() || ec.format == OutputFormat::Json) {
    body = ec.format == OutputFormat::Csv ? iirofdm::harness::format_inspect_csv(rep)
                                          : iirofdm::harness::format_inspect_json(rep);
  } else {
    body = iirofdm::harness::format_inspect_text(rep);
  }
  if (ec.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(ec.out, std::ios::binary);
  if (!file) throw iirofdm::ConfigError("cannot open output file '" + ec.out + "'");
  file << body;
  std::cerr << iirofdm::harness::format_inspect_text(rep);
}

constexpr double kRoundtripThreshold = 1e-9;

}  // namespace

int main(int argc, char** argv) try {
  CLI::App app{"OFDM modem and Monte Carlo harness for rational channels B(z)/A(z)"};
  app.require_subcommand(1);
  RawOptions raw;

  CLI::App* roundtrip =
      app.add_subcommand("roundtrip", "Noiseless end-to-end recovery check over the channel");
  CLI::App* ber = app.add_subcommand("ber", "Monte Carlo BER sweep over the SNR points");
  CLI::App* sensitivity = app.add_subcommand(
      "sensitivity", "EVM/BER versus relative error in the transmitter's A(z) coefficients");
  CLI::App* inspect_cmd =
      app.add_subcommand("inspect", "Report subcarrier gains, stability and guard requirement");
  CLI::App* baseline = app.add_subcommand(
      "baseline", "Conventional CP-OFDM with truncated-impulse-response equalization");
  for (CLI::App* sub : {roundtrip, ber, sensitivity, inspect_cmd, baseline}) {
    add_common_options(sub, &raw);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // nonzero parse failures are config errors
  }

  CLI::App* sub = app.get_subcommands().front();

  try {
    if (!raw.config_path.empty()) merge_config_file(sub, &raw);
    const ExperimentConfig ec = build_config(raw);

    if (sub == inspect_cmd) {
      write_inspect(iirofdm::harness::inspect(ec), ec);
      return 0;
    }

    iirofdm::harness::SimReport report;
    if (sub == roundtrip) {
      report = iirofdm::harness::run_roundtrip(ec);
    } else if (sub == ber) {
      report = iirofdm::harness::run_ber_sweep(ec);
    } else if (sub == sensitivity) {
      report = iirofdm::harness::run_sensitivity(ec);
    } else {
      report = iirofdm::harness::run_baseline(ec);
    }
    iirofdm::harness::write_report(report, ec);

    for (const auto& r : report.records) {
      if (!r.error.empty()) {
        std::cerr << "row " << report.x_column << "=" << iirofdm::format_double(r.x)
                  << " skipped: " << r.error << "\n";
      }
    }

    if (sub == roundtrip) {
      std::cerr << "max |Xhat - X| = " << iirofdm::format_double(report.max_spectral_error)
                << ", evm_rms = " << iirofdm::format_double(report.records.front().evm_rms)
                << "\n";
      if (!(report.max_spectral_error <= kRoundtripThreshold)) {
        std::cerr << "roundtrip error exceeds " << iirofdm::format_double(kRoundtripThreshold)
                  << "\n";
        return 4;
      }
    }
    return 0;
  } catch (const iirofdm::ChannelError& e) {
    std::cerr << "channel error: " << e.what() << "\n";
    return 3;
  } catch (const iirofdm::ModemError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
} catch (const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 2;
} catch (...) {
  std::cerr << "error: unknown failure\n";
  return 2;
}
