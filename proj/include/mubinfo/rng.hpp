#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>

namespace mubinfo {

/// Seeded random source used by every randomized routine.
///
/// The engine is std::mt19937_64 keyed through std::seed_seq on the four
/// 32-bit words of (seed, stream). Both algorithms are fixed by the C++
/// standard, and the uniform/normal conversions below are written out
/// explicitly rather than taken from <random> distributions, so a given
/// (seed, stream) pair yields the same sequence on every conforming
/// toolchain. Independent trials use distinct stream indices, which makes
/// results independent of the order the trials are executed in.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random mantissa bits.
  double uniform();

  /// Standard normal via Box-Muller.
  double normal();

  /// Re and Im independent standard normals.
  std::complex<double> complex_normal();

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace mubinfo
