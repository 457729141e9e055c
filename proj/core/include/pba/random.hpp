#pragma once

#include <cstddef>
#include <cstdint>

namespace pba {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter) through three rounds of the SplitMix64 finalizer.
/// Noise generation keys the stream by pixel index, so output does not depend
/// on evaluation order. The construction is fixed; changing it invalidates
/// every seeded fixture in the test suite.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : seed_(seed), stream_(stream) {}

  static std::uint64_t hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;

  std::uint64_t next_u64() noexcept { return hash(seed_, stream_, counter_++); }

  /// Uniform on the open interval (0, 1), 52-bit resolution.
  double next_uniform() noexcept;

  /// Standard normal via the inverse CDF.
  double next_normal() noexcept;

  /// Uniform integer in [0, n), unbiased (rejection on the top range).
  std::size_t next_below(std::size_t n) noexcept;

  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

double uniform_from_bits(std::uint64_t bits) noexcept;

/// Inverse of the standard normal CDF for p in (0, 1). Rational
/// approximation refined with one Halley step against erfc.
double normal_quantile(double p) noexcept;

}  // namespace pba
