#pragma once

#include <cstddef>
#include <cstdint>

#include "pba/patch_grid.hpp"

namespace pba {

enum class NoiseKind { Gaussian, Speckle };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  double sigma = 0.0;     // gaussian
  unsigned looks = 1;     // speckle
  std::uint64_t seed = 0;
  bool clip = false;

  void validate() const;
};

// Every variate is keyed by (seed, pixel index), so images can be generated
// in any order or in parallel with identical results.

/// N(0, 1) sample for pixel `index`.
double gaussian_variate(std::uint64_t seed, std::size_t index) noexcept;

/// Gamma(looks, 1/looks) sample for pixel `index`: mean 1, variance 1/looks.
/// Integer looks make this the mean of `looks` unit exponentials.
double speckle_variate(std::uint64_t seed, std::size_t index, unsigned looks) noexcept;

/// img + N(0, sigma^2), optionally clamped to [0, 255].
Image add_gaussian(const Image& img, double sigma, std::uint64_t seed, bool clip);

/// img * Gamma(looks, 1/looks) on intensities. Throws NegativeInput for
/// pixels < 0.
Image add_speckle(const Image& img, unsigned looks, std::uint64_t seed, bool clip);

Image apply_noise(const Image& img, const NoiseSpec& spec);

}  // namespace pba
