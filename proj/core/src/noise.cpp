#include "pba/noise.hpp"

#include <algorithm>
#include <cmath>

#include "pba/error.hpp"
#include "pba/random.hpp"

namespace pba {

void NoiseSpec::validate() const {
  if (kind == NoiseKind::Gaussian && !(sigma > 0.0 && std::isfinite(sigma)))
    throw Error(ErrorCode::InvalidArgument, "gaussian noise needs sigma > 0");
  if (kind == NoiseKind::Speckle && looks < 1)
    throw Error(ErrorCode::InvalidArgument, "speckle needs looks >= 1");
}

double gaussian_variate(std::uint64_t seed, std::size_t index) noexcept {
  return CounterRng(seed, index).next_normal();
}

double speckle_variate(std::uint64_t seed, std::size_t index, unsigned looks) noexcept {
  CounterRng rng(seed, index);
  double sum = 0.0;
  for (unsigned l = 0; l < looks; ++l) sum -= std::log(rng.next_uniform());
  return sum / static_cast<double>(looks);
}

namespace {

void clamp_pixels(Image& img) {
  for (double& v : img.pixels()) v = std::clamp(v, 0.0, 255.0);
}

}  // namespace

Image add_gaussian(const Image& img, double sigma, std::uint64_t seed, bool clip) {
  NoiseSpec{NoiseKind::Gaussian, sigma, 1, seed, clip}.validate();
  Image out = img;
  auto& px = out.pixels();
  for (std::size_t p = 0; p < px.size(); ++p) px[p] += sigma * gaussian_variate(seed, p);
  if (clip) clamp_pixels(out);
  return out;
}

Image add_speckle(const Image& img, unsigned looks, std::uint64_t seed, bool clip) {
  NoiseSpec{NoiseKind::Speckle, 0.0, looks, seed, clip}.validate();
  if (std::ranges::any_of(img.pixels(), [](double v) { return v < 0.0; }))
    throw Error(ErrorCode::NegativeInput, "speckle needs nonnegative intensities");
  Image out = img;
  auto& px = out.pixels();
  for (std::size_t p = 0; p < px.size(); ++p) px[p] *= speckle_variate(seed, p, looks);
  if (clip) clamp_pixels(out);
  return out;
}

Image apply_noise(const Image& img, const NoiseSpec& spec) {
  spec.validate();
  return spec.kind == NoiseKind::Gaussian ? add_gaussian(img, spec.sigma, spec.seed, spec.clip)
                                          : add_speckle(img, spec.looks, spec.seed, spec.clip);
}

}  // namespace pba
