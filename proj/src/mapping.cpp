#include "iirofdm/mapping.hpp"

#include <cmath>
#include <limits>

#include "iirofdm/errors.hpp"

namespace iirofdm {

using Eigen::Index;

Constellation make_constellation(std::string_view name) {
  Constellation c;
  if (name == "qpsk") {
    c.name = "qpsk";
    c.bits_per_symbol = 2;
    c.points.resize(4);
    const double s = 1.0 / std::sqrt(2.0);
    for (int label = 0; label < 4; ++label) {
      const double i = (label & 0b10) ? -s : s;
      const double q = (label & 0b01) ? -s : s;
      c.points(label) = Complex{i, q};
    }
  } else if (name == "qam16") {
    c.name = "qam16";
    c.bits_per_symbol = 4;
    c.points.resize(16);
    const double s = 1.0 / std::sqrt(10.0);
    // Gray levels indexed by the 2-bit value: 00,01,11,10 -> +3,+1,-1,-3
    const double level[4] = {3.0, 1.0, -3.0, -1.0};
    for (int label = 0; label < 16; ++label) {
      const double i = level[(label >> 2) & 0b11] * s;
      const double q = level[label & 0b11] * s;
      c.points(label) = Complex{i, q};
    }
  } else {
    throw ConfigError("unknown modulation '" + std::string(name) + "' (expected qpsk or qam16)");
  }
  return c;
}

Eigen::VectorXcd map_bits(const Constellation& c, const BitSequence& bits) {
  const int bps = c.bits_per_symbol;
  if (bits.size() % static_cast<std::size_t>(bps) != 0) {
    throw SizeError("bit count " + std::to_string(bits.size()) + " is not divisible by " +
                    std::to_string(bps));
  }
  const Index n_symbols = static_cast<Index>(bits.size()) / bps;
  Eigen::VectorXcd out(n_symbols);
  for (Index s = 0; s < n_symbols; ++s) {
    int label = 0;
    for (int j = 0; j < bps; ++j) {
      label = (label << 1) | (bits[static_cast<std::size_t>(s) * bps + j] ? 1 : 0);
    }
    out(s) = c.points(label);
  }
  return out;
}

BitSequence demap_hard(const Constellation& c, const Eigen::VectorXcd& symbols) {
  const int bps = c.bits_per_symbol;
  BitSequence out(static_cast<std::size_t>(symbols.size()) * bps);
  for (Index s = 0; s < symbols.size(); ++s) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int label = 0; label < c.points.size(); ++label) {
      const double d = std::norm(symbols(s) - c.points(label));
      if (d < best_dist) {
        best_dist = d;
        best = label;
      }
    }
    for (int j = 0; j < bps; ++j) {
      out[static_cast<std::size_t>(s) * bps + j] =
          static_cast<std::uint8_t>((best >> (bps - 1 - j)) & 1);
    }
  }
  return out;
}

std::size_t count_bit_errors(const BitSequence& sent, const BitSequence& recv) {
  if (sent.size() != recv.size()) {
    throw SizeError("bit sequence length mismatch: " + std::to_string(sent.size()) + " vs " +
                    std::to_string(recv.size()));
  }
  std::size_t errors = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if ((sent[i] != 0) != (recv[i] != 0)) ++errors;
  }
  return errors;
}

}  // namespace iirofdm
