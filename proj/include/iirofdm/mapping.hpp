#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "iirofdm/spectra.hpp"

namespace iirofdm {

using BitSequence = std::vector<std::uint8_t>;  // one bit per element

// Gray-labeled constellation with unit average energy. A symbol's label is
// its bit group read MSB-first; points[label] is its position.
struct Constellation {
  std::string name;
  int bits_per_symbol = 0;
  Eigen::VectorXcd points;
};

// name is "qpsk" or "qam16". The labelings are fixed so outputs are
// reproducible byte for byte:
//   qpsk : b0 -> I sign, b1 -> Q sign, bit 0 = +; 00 -> (1+j)/sqrt(2)
//   qam16: (b0 b1) -> I level, (b2 b3) -> Q level via the Gray sequence
//          00,01,11,10 -> +3,+1,-1,-3, all scaled by 1/sqrt(10)
Constellation make_constellation(std::string_view name);

Eigen::VectorXcd map_bits(const Constellation& c, const BitSequence& bits);

// Minimum-distance hard decisions; exact ties resolve to the lower label.
BitSequence demap_hard(const Constellation& c, const Eigen::VectorXcd& symbols);

// Hamming distance between two equal-length bit sequences.
std::size_t count_bit_errors(const BitSequence& sent, const BitSequence& recv);

}  // namespace iirofdm
