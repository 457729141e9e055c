#pragma once

// Seeded synthetic images shared by the unit, CLI and acceptance suites.

#include <cmath>
#include <cstdint>
#include <numbers>

#include "pba/noise.hpp"
#include "pba/patch_grid.hpp"
#include "pba/random.hpp"

namespace pba::fixtures {

/// 128 + three oriented sinusoids + a vertical step edge at x = 37.
/// The seed only moves the sinusoid phases.
inline Image texture_image(std::size_t width, std::size_t height, std::uint64_t seed) {
  CounterRng rng(seed, 7);
  const double two_pi = 2.0 * std::numbers::pi;
  const double ph1 = two_pi * rng.next_uniform();
  const double ph2 = two_pi * rng.next_uniform();
  const double ph3 = two_pi * rng.next_uniform();
  Image img(width, height);
  for (std::size_t y = 0; y < height; ++y)
    for (std::size_t x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x);
      const double fy = static_cast<double>(y);
      double v = 128.0;
      v += 30.0 * std::sin(two_pi * (0.09 * fx + 0.03 * fy) + ph1);
      v += 25.0 * std::sin(two_pi * (-0.05 * fx + 0.11 * fy) + ph2);
      v += 20.0 * std::sin(two_pi * (0.13 * fx + 0.07 * fy) + ph3);
      v += x >= 37 ? 30.0 : -30.0;
      img.at(x, y) = v;
    }
  return img;
}

/// Zero-mean white Gaussian noise image.
inline Image noise_image(std::size_t width, std::size_t height, double sigma, std::uint64_t seed) {
  return add_gaussian(Image(width, height, 0.0), sigma, seed, false);
}

/// Piecewise-constant shapes (background, rectangle, disk, wedge) plus a
/// striped texture patch. The seed shifts the disk centre and stripe phase.
inline Image phantom_image(std::size_t size, std::uint64_t seed) {
  CounterRng rng(seed, 11);
  const double s = static_cast<double>(size);
  const double cx = s * (0.62 + 0.06 * rng.next_uniform());
  const double cy = s * (0.30 + 0.06 * rng.next_uniform());
  const double phase = 2.0 * std::numbers::pi * rng.next_uniform();
  Image img(size, size, 70.0);
  for (std::size_t y = 0; y < size; ++y)
    for (std::size_t x = 0; x < size; ++x) {
      const double fx = static_cast<double>(x);
      const double fy = static_cast<double>(y);
      double v = 70.0;
      if (fx >= 0.10 * s && fx < 0.42 * s && fy >= 0.12 * s && fy < 0.45 * s) v = 190.0;
      const double dx = fx - cx, dy = fy - cy;
      if (dx * dx + dy * dy < (0.18 * s) * (0.18 * s)) v = 130.0;
      if (fy > 0.55 * s && fx > 0.08 * s && fx - 0.08 * s < (fy - 0.55 * s) * 0.9) v = 40.0;
      if (fx >= 0.55 * s && fx < 0.92 * s && fy >= 0.58 * s && fy < 0.92 * s)
        v = 150.0 + 45.0 * std::sin(2.0 * std::numbers::pi * 0.125 * (fx + 0.5 * fy) + phase);
      img.at(x, y) = v;
    }
  return img;
}

}  // namespace pba::fixtures
