#pragma once

#include <cstddef>

#include "pba/patch_grid.hpp"

namespace pba {

/// Defaults are the standard SSIM settings (11x11 Gaussian window,
/// sigma 1.5, K1 = 0.01, K2 = 0.03) and an 8-bit peak.
struct MetricConfig {
  double peak = 255.0;
  std::size_t ssim_window = 11;
  double ssim_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  /// Round both images to 8-bit (half-to-even, clamped) before scoring.
  bool quantize = false;
};

/// 10 log10(peak^2 / MSE); +infinity when the images are identical.
/// Throws DimensionMismatch.
double psnr(const Image& ref, const Image& test, const MetricConfig& cfg = {});

double mse(const Image& ref, const Image& test);

/// Local SSIM at every position where the window fits inside the image
/// ("valid" positions), as an image of size (W - win + 1) x (H - win + 1).
/// Throws DimensionMismatch, TooSmall.
Image ssim_map(const Image& ref, const Image& test, const MetricConfig& cfg = {});

/// Mean of ssim_map.
double ssim(const Image& ref, const Image& test, const MetricConfig& cfg = {});

/// Round-half-to-even to integers in [0, 255].
Image quantize_8bit(const Image& img);

}  // namespace pba
