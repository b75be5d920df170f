#pragma once

#include <cstdint>
#include <limits>

#include "fellkit/linalg.hpp"

namespace fellkit {

/// SplitMix64: 64-bit state, one add and three xor-shift-multiply rounds per
/// draw. Satisfies UniformRandomBitGenerator. Distributions below are built on
/// top of it directly (not via <random> distributions) so sampled checks are
/// reproducible across standard library implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via Box-Muller (no cached second value).
  double normal();

  Complex complexNormal();

 private:
  std::uint64_t state_;
};

Matrix randomMatrix(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal pushed into Q.
Matrix randomUnitary(Eigen::Index n, SplitMix64& rng);

Complex randomPhase(SplitMix64& rng);

}  // namespace fellkit
