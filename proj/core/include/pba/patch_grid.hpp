#pragma once

#include <cstddef>
#include <vector>

#include "pba/matrix.hpp"

namespace pba {

/// Grayscale image, row-major pixels, nominal intensity range [0, 255].
class Image {
 public:
  Image() = default;
  Image(std::size_t width, std::size_t height, double fill = 0.0);
  Image(std::size_t width, std::size_t height, std::vector<double> pixels);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }
  [[nodiscard]] std::size_t size() const noexcept { return pixels_.size(); }

  double& at(std::size_t x, std::size_t y) noexcept { return pixels_[y * width_ + x]; }
  double at(std::size_t x, std::size_t y) const noexcept { return pixels_[y * width_ + x]; }

  [[nodiscard]] const std::vector<double>& pixels() const noexcept { return pixels_; }
  [[nodiscard]] std::vector<double>& pixels() noexcept { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

/// Square patches on a regular grid of fully interior positions.
struct PatchGeometry {
  std::size_t patch_side = 8;
  std::size_t stride = 1;
  std::size_t image_width = 0;
  std::size_t image_height = 0;

  /// Throws GeometryMismatch unless 1 <= patch_side <= min(width, height)
  /// and stride >= 1.
  static PatchGeometry for_image(const Image& img, std::size_t patch_side, std::size_t stride);

  [[nodiscard]] std::size_t positions_x() const noexcept { return (image_width - patch_side) / stride + 1; }
  [[nodiscard]] std::size_t positions_y() const noexcept { return (image_height - patch_side) / stride + 1; }
  [[nodiscard]] std::size_t patch_count() const noexcept { return positions_x() * positions_y(); }
  [[nodiscard]] std::size_t patch_dim() const noexcept { return patch_side * patch_side; }

  void validate() const;
  void validate_for(const Image& img) const;
};

/// N x M patch matrix. Column m is the patch at grid position m, grid walked
/// row-major; pixels inside a patch are read column-major.
Matrix extract_patches(const Image& img, const PatchGeometry& geom);

/// Per-pixel number of patches covering it.
std::vector<std::size_t> cover_counts(const PatchGeometry& geom);

/// Closed-form minimiser of gamma*||S - noisy||^2 + sum_m ||R_m S - patch_m||^2:
///   out[p] = (gamma * noisy[p] + sum of patch values at p) / (gamma + cover[p]).
/// Pixels with gamma + cover == 0 keep the noisy value.
Image reassemble(const Matrix& patches, const Image& noisy, const PatchGeometry& geom, double gamma);

}  // namespace pba
