#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iirofdm/spectra.hpp"

namespace iirofdm {

// Parses one complex literal in re+imj form: "1", "-0.8", "0.5+0.25j",
// "-j", "1e-3-2e-2j". Throws ConfigError on malformed input.
Complex parse_complex(std::string_view text);

// Comma-separated list of complex literals, e.g. "1,-0.8,0.15".
Coefficients parse_complex_list(std::string_view text);

// Comma-separated reals; accepts "inf" for the no-noise sentinel.
std::vector<double> parse_double_list(std::string_view text);

// Shortest round-trip decimal representation ("inf"/"nan" for non-finite).
std::string format_double(double value);

// re+imj form matching parse_complex.
std::string format_complex(Complex value);

}  // namespace iirofdm
