#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spikecs {

/// Seeded random stream used everywhere randomness is needed.
///
/// The generator is std::mt19937_64 and all variates are derived from the
/// raw 64-bit output with the explicit arithmetic below, so a seed fully
/// determines every draw.  Streams are created per caller and never shared.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  /// Uniform in [0, 1): top 53 bits of one engine output.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (cosine branch). Consumes exactly two
  /// engine outputs per call; nothing is cached.
  double gaussian() {
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace spikecs
