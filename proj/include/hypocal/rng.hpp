#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hypocal/types.hpp"

namespace hypocal {

/// Seeded random stream with fixed transforms.
///
/// std::mt19937_64 output is fully specified by the standard; the uniform and
/// normal transforms are implemented here (not via std::*_distribution, whose
/// algorithms are implementation-defined) so that identical seeds give
/// bit-identical streams on every toolchain.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
  }

  /// Standard normal via Box-Muller; consumes exactly two engine draws.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double sigma) {
    return mean + sigma * normal();
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace hypocal
