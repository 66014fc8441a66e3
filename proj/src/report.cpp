#include <fstream>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "iirofdm/complexio.hpp"
#include "iirofdm/errors.hpp"
#include "iirofdm/harness.hpp"

namespace iirofdm::harness {

namespace {

using ordered_json = nlohmann::ordered_json;

// JSON has no literal for non-finite numbers; encode them as strings.
ordered_json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string coefficients_string(const Coefficients& c) {
  std::string out;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    if (k) out += ',';
    out += format_complex(c(k));
  }
  return out;
}

}  // namespace

std::string to_csv(const SimReport& report) {
  std::string out = report.x_column +
                    ",trials,bits,bit_errors,ber,evm_rms,analytic_ber,avg_tx_power,avg_rx_power\n";
  for (const ReportRecord& r : report.records) {
    out += format_double(r.x);
    out += ',' + std::to_string(r.trials);
    out += ',' + std::to_string(r.bits);
    out += ',' + std::to_string(r.bit_errors);
    out += ',' + format_double(r.ber);
    out += ',' + format_double(r.evm_rms);
    out += ',';
    if (r.analytic_ber) out += format_double(*r.analytic_ber);
    out += ',' + format_double(r.avg_tx_power);
    out += ',' + format_double(r.avg_rx_power);
    out += '\n';
  }
  return out;
}

std::string to_json_string(const SimReport& report) {
  ordered_json rows = ordered_json::array();
  for (const ReportRecord& r : report.records) {
    ordered_json row;
    row[report.x_column] = json_number(r.x);
    row["trials"] = r.trials;
    row["bits"] = r.bits;
    row["bit_errors"] = r.bit_errors;
    row["ber"] = json_number(r.ber);
    row["evm_rms"] = json_number(r.evm_rms);
    row["analytic_ber"] = r.analytic_ber ? ordered_json(json_number(*r.analytic_ber))
                                         : ordered_json(nullptr);
    row["avg_tx_power"] = json_number(r.avg_tx_power);
    row["avg_rx_power"] = json_number(r.avg_rx_power);
    if (!r.error.empty()) row["error"] = r.error;
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

void write_report(const SimReport& report, const ExperimentConfig& ec) {
  const std::string body =
      ec.format == OutputFormat::Csv ? to_csv(report) : to_json_string(report);
  if (ec.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream file(ec.out, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + ec.out + "'");
  file << body;
}

std::string format_inspect_text(const InspectReport& r) {
  Eigen::Index a_min = 0, a_max = 0, b_min = 0, b_max = 0;
  r.abs_a_k.minCoeff(&a_min);
  r.abs_a_k.maxCoeff(&a_max);
  r.abs_b_k.minCoeff(&b_min);
  r.abs_b_k.maxCoeff(&b_max);

  std::string out;
  out += "channel: a = [" + coefficients_string(r.a) + "], b = [" + coefficients_string(r.b) + "]\n";
  out += "orders: Ga=" + std::to_string(r.a.size() - 1) + ", Gb=" + std::to_string(r.b.size() - 1) +
         ", guard requirement max(Ga,Gb)=" + std::to_string(r.guard_required) + "\n";
  out += "configured: N=" + std::to_string(r.n) + ", G=" + std::to_string(r.guard);
  if (r.guard < r.guard_required) out += "  (WARNING: G below the requirement)";
  out += "\n";
  out += std::string("stable (margin ") + format_double(r.margin) + "): " + (r.stable ? "yes" : "no") + "\n";
  out += "|A_k|: min " + format_double(r.abs_a_k(a_min)) + " at k=" + std::to_string(a_min) +
         ", max " + format_double(r.abs_a_k(a_max)) + " at k=" + std::to_string(a_max) + "\n";
  out += "|B_k|: min " + format_double(r.abs_b_k(b_min)) + " at k=" + std::to_string(b_min) +
         ", max " + format_double(r.abs_b_k(b_max)) + " at k=" + std::to_string(b_max) + "\n";
  out += "singular subcarriers (tol " + format_double(r.tol) + " relative): ";
  if (r.singular_a.empty() && r.singular_b.empty()) {
    out += "none\n";
  } else {
    for (Eigen::Index k : r.singular_a) out += "A_" + std::to_string(k) + " ";
    for (Eigen::Index k : r.singular_b) out += "B_" + std::to_string(k) + " ";
    out += "\n";
  }
  return out;
}

std::string format_inspect_csv(const InspectReport& r) {
  std::string out = "k,abs_a_k,abs_b_k\n";
  for (Eigen::Index k = 0; k < r.n; ++k) {
    out += std::to_string(k) + ',' + format_double(r.abs_a_k(k)) + ',' +
           format_double(r.abs_b_k(k)) + '\n';
  }
  return out;
}

std::string format_inspect_json(const InspectReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["guard"] = r.guard;
  j["guard_required"] = r.guard_required;
  j["stable"] = r.stable;
  j["a"] = coefficients_string(r.a);
  j["b"] = coefficients_string(r.b);
  j["abs_a_k"] = std::vector<double>(r.abs_a_k.data(), r.abs_a_k.data() + r.abs_a_k.size());
  j["abs_b_k"] = std::vector<double>(r.abs_b_k.data(), r.abs_b_k.data() + r.abs_b_k.size());
  j["singular_a"] = r.singular_a;
  j["singular_b"] = r.singular_b;
  return j.dump(2) + "\n";
}

}  // namespace iirofdm::harness
