#include "pba/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pba/error.hpp"

namespace pba {

namespace {

void check_same_shape(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw Error(ErrorCode::DimensionMismatch, "images differ in size");
}

std::vector<double> gaussian_kernel(std::size_t n, double sigma) {
  std::vector<double> k(n);
  const double c = static_cast<double>(n / 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(i) - c;
    k[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Separable "valid" filtering of a row-major w x h buffer.
std::vector<double> filter_valid(const std::vector<double>& src, std::size_t w, std::size_t h,
                                 const std::vector<double>& k) {
  const std::size_t n = k.size();
  const std::size_t ow = w - n + 1;
  const std::size_t oh = h - n + 1;
  std::vector<double> tmp(ow * h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += k[i] * src[y * w + x + i];
      tmp[y * ow + x] = s;
    }
  std::vector<double> out(ow * oh);
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += k[i] * tmp[(y + i) * ow + x];
      out[y * ow + x] = s;
    }
  return out;
}

}  // namespace

Image quantize_8bit(const Image& img) {
  Image out = img;
  // nearbyint honours the default round-to-nearest-even mode.
  for (double& v : out.pixels()) v = std::clamp(std::nearbyint(v), 0.0, 255.0);
  return out;
}

double mse(const Image& ref, const Image& test) {
  check_same_shape(ref, test);
  if (ref.size() == 0) throw Error(ErrorCode::TooSmall, "empty image");
  double s = 0.0;
  for (std::size_t p = 0; p < ref.size(); ++p) {
    const double d = ref.pixels()[p] - test.pixels()[p];
    s += d * d;
  }
  return s / static_cast<double>(ref.size());
}

double psnr(const Image& ref, const Image& test, const MetricConfig& cfg) {
  const double e = cfg.quantize ? mse(quantize_8bit(ref), quantize_8bit(test)) : mse(ref, test);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(cfg.peak * cfg.peak / e);
}

Image ssim_map(const Image& ref_in, const Image& test_in, const MetricConfig& cfg) {
  check_same_shape(ref_in, test_in);
  if (cfg.ssim_window == 0 || cfg.ssim_window % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "SSIM window must be odd");
  if (cfg.ssim_window > std::min(ref_in.width(), ref_in.height()))
    throw Error(ErrorCode::TooSmall, "image smaller than SSIM window");

  const Image ref = cfg.quantize ? quantize_8bit(ref_in) : ref_in;
  const Image test = cfg.quantize ? quantize_8bit(test_in) : test_in;
  const std::size_t w = ref.width();
  const std::size_t h = ref.height();
  const auto k = gaussian_kernel(cfg.ssim_window, cfg.ssim_sigma);

  const auto& a = ref.pixels();
  const auto& b = test.pixels();
  std::vector<double> aa(a.size()), bb(a.size()), ab(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) {
    aa[p] = a[p] * a[p];
    bb[p] = b[p] * b[p];
    ab[p] = a[p] * b[p];
  }
  const auto mu_a = filter_valid(a, w, h, k);
  const auto mu_b = filter_valid(b, w, h, k);
  const auto e_aa = filter_valid(aa, w, h, k);
  const auto e_bb = filter_valid(bb, w, h, k);
  const auto e_ab = filter_valid(ab, w, h, k);

  const double c1 = (cfg.k1 * cfg.peak) * (cfg.k1 * cfg.peak);
  const double c2 = (cfg.k2 * cfg.peak) * (cfg.k2 * cfg.peak);
  const std::size_t ow = w - cfg.ssim_window + 1;
  const std::size_t oh = h - cfg.ssim_window + 1;
  Image map(ow, oh);
  auto& out = map.pixels();
  for (std::size_t p = 0; p < out.size(); ++p) {
    const double ma = mu_a[p];
    const double mb = mu_b[p];
    const double va = e_aa[p] - ma * ma;
    const double vb = e_bb[p] - mb * mb;
    const double cov = e_ab[p] - ma * mb;
    out[p] = ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return map;
}

double ssim(const Image& ref, const Image& test, const MetricConfig& cfg) {
  const Image map = ssim_map(ref, test, cfg);
  double s = 0.0;
  for (double v : map.pixels()) s += v;
  return s / static_cast<double>(map.size());
}

}  // namespace pba
