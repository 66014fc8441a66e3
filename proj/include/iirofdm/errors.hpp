#pragma once

#include <stdexcept>
#include <string>

namespace iirofdm {

// Base class for all library errors.
struct ModemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Wrong or inconsistent container sizes (blocks, streams, bit sequences).
struct SizeError : ModemError {
  using ModemError::ModemError;
};

// Invalid OFDM dimensions or a malformed experiment configuration.
struct ConfigError : ModemError {
  using ModemError::ModemError;
};

// Invalid channel coefficients, or a channel rejected as unstable.
struct ChannelError : ModemError {
  using ModemError::ModemError;
};

// A subcarrier gain too close to zero for per-subcarrier inversion.
class GainSingularError : public ChannelError {
 public:
  GainSingularError(const std::string& which, long long subcarrier, double magnitude)
      : ChannelError(which + " gain is singular at subcarrier k=" + std::to_string(subcarrier) +
                     " (|gain| = " + std::to_string(magnitude) + ")"),
        subcarrier_(subcarrier) {}

  long long subcarrier() const noexcept { return subcarrier_; }

 private:
  long long subcarrier_;
};

}  // namespace iirofdm
