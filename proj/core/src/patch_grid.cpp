#include "pba/patch_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pba/error.hpp"
#include "pba/parallel.hpp"

namespace pba {

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_)
    throw Error(ErrorCode::DimensionMismatch, "image pixel count does not match width x height");
  if (!std::ranges::all_of(pixels_, [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCode::InvalidArgument, "image contains non-finite pixels");
}

void PatchGeometry::validate() const {
  if (patch_side == 0 || stride == 0)
    throw Error(ErrorCode::GeometryMismatch, "patch side and stride must be positive");
  if (patch_side > std::min(image_width, image_height))
    throw Error(ErrorCode::GeometryMismatch, "patch side " + std::to_string(patch_side) +
                                                 " exceeds image dimension " +
                                                 std::to_string(std::min(image_width, image_height)));
}

void PatchGeometry::validate_for(const Image& img) const {
  validate();
  if (img.width() != image_width || img.height() != image_height)
    throw Error(ErrorCode::GeometryMismatch, "geometry was built for a different image size");
}

PatchGeometry PatchGeometry::for_image(const Image& img, std::size_t patch_side, std::size_t stride) {
  PatchGeometry g{patch_side, stride, img.width(), img.height()};
  g.validate();
  return g;
}

Matrix extract_patches(const Image& img, const PatchGeometry& geom) {
  geom.validate_for(img);
  const std::size_t side = geom.patch_side;
  const std::size_t nx = geom.positions_x();
  Matrix x(geom.patch_dim(), geom.patch_count());
  parallel_for(x.cols(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      const std::size_t x0 = (m % nx) * geom.stride;
      const std::size_t y0 = (m / nx) * geom.stride;
      auto col = x.col(m);
      for (std::size_t dx = 0; dx < side; ++dx)
        for (std::size_t dy = 0; dy < side; ++dy) col[dx * side + dy] = img.at(x0 + dx, y0 + dy);
    }
  });
  return x;
}

std::vector<std::size_t> cover_counts(const PatchGeometry& geom) {
  geom.validate();
  std::vector<std::size_t> count(geom.image_width * geom.image_height, 0);
  const std::size_t nx = geom.positions_x();
  for (std::size_t m = 0; m < geom.patch_count(); ++m) {
    const std::size_t x0 = (m % nx) * geom.stride;
    const std::size_t y0 = (m / nx) * geom.stride;
    for (std::size_t dy = 0; dy < geom.patch_side; ++dy)
      for (std::size_t dx = 0; dx < geom.patch_side; ++dx) ++count[(y0 + dy) * geom.image_width + x0 + dx];
  }
  return count;
}

Image reassemble(const Matrix& patches, const Image& noisy, const PatchGeometry& geom, double gamma) {
  geom.validate_for(noisy);
  if (patches.rows() != geom.patch_dim() || patches.cols() != geom.patch_count())
    throw Error(ErrorCode::GeometryMismatch, "patch matrix shape does not match geometry");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::InvalidArgument, "gamma must be finite and nonnegative");

  const std::size_t w = geom.image_width;
  const std::size_t side = geom.patch_side;
  const std::size_t nx = geom.positions_x();
  std::vector<double> sum(noisy.size(), 0.0);
  std::vector<std::size_t> count(noisy.size(), 0);
  // Sequential in patch order: the per-pixel summation order is fixed.
  for (std::size_t m = 0; m < patches.cols(); ++m) {
    const std::size_t x0 = (m % nx) * geom.stride;
    const std::size_t y0 = (m / nx) * geom.stride;
    auto col = patches.col(m);
    for (std::size_t dx = 0; dx < side; ++dx)
      for (std::size_t dy = 0; dy < side; ++dy) {
        const std::size_t p = (y0 + dy) * w + x0 + dx;
        sum[p] += col[dx * side + dy];
        ++count[p];
      }
  }

  Image out(noisy.width(), noisy.height());
  const auto& in = noisy.pixels();
  auto& px = out.pixels();
  for (std::size_t p = 0; p < px.size(); ++p) {
    const double denom = gamma + static_cast<double>(count[p]);
    px[p] = denom > 0.0 ? (gamma * in[p] + sum[p]) / denom : in[p];
  }
  return out;
}

}  // namespace pba
