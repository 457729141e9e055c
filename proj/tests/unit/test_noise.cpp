#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "pba/error.hpp"
#include "pba/metrics.hpp"
#include "pba/noise.hpp"
#include "pba/random.hpp"

namespace pba {
namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  const long double mean = s / static_cast<long double>(v.size());
  long double q = 0.0L;
  for (double x : v) q += (x - mean) * (x - mean);
  return {static_cast<double>(mean), static_cast<double>(q / static_cast<long double>(v.size()))};
}

TEST(Rng, UniformStaysInOpenInterval) {
  EXPECT_GT(uniform_from_bits(0), 0.0);
  EXPECT_LT(uniform_from_bits(~std::uint64_t{0}), 1.0);
}

TEST(Rng, NormalQuantileKnownValues) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.001), -3.090232306167813, 1e-12);
  EXPECT_NEAR(normal_quantile(1e-12), -7.034483825301131, 1e-9);
}

TEST(Rng, CounterBasedAndSeedSensitive) {
  CounterRng a(1, 2), b(1, 2), c(2, 2);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  EXPECT_EQ(CounterRng::hash(1, 2, 5), [] {
    CounterRng r(1, 2);
    for (int i = 0; i < 5; ++i) (void)r.next_u64();
    return r.next_u64();
  }());
}

TEST(Rng, NextBelowIsUniformish) {
  CounterRng rng(9);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 70000; ++i) ++hist[rng.next_below(7)];
  for (int h : hist) EXPECT_NEAR(h, 10000, 400);
}

TEST(Noise, Deterministic) {
  const Image img(32, 32, 100.0);
  EXPECT_EQ(add_gaussian(img, 10.0, 5, false), add_gaussian(img, 10.0, 5, false));
  EXPECT_NE(add_gaussian(img, 10.0, 5, false), add_gaussian(img, 10.0, 6, false));
  EXPECT_EQ(add_speckle(img, 4, 5, false), add_speckle(img, 4, 5, false));
}

TEST(Noise, GaussianMoments) {
  const double sigma = 20.0;
  const Image noisy = add_gaussian(Image(1000, 1000, 0.0), sigma, 17, false);
  const auto m = moments(noisy.pixels());
  EXPECT_LT(std::abs(m.mean), 4.0 * sigma / 1000.0);
  EXPECT_NEAR(std::sqrt(m.var), sigma, 0.01 * sigma);
}

TEST(Noise, GaussianLagOneAutocorrelation) {
  const Image noisy = add_gaussian(Image(1000, 1000, 0.0), 1.0, 23, false);
  const auto& v = noisy.pixels();
  const auto m = moments(v);
  long double c = 0.0L;
  for (std::size_t i = 1; i < v.size(); ++i) c += (v[i] - m.mean) * (v[i - 1] - m.mean);
  const double rho = static_cast<double>(c / static_cast<long double>(v.size() - 1)) / m.var;
  EXPECT_LT(std::abs(rho), 0.01);
}

TEST(Noise, SpeckleOneLookIsUnitExponential) {
  const Image noisy = add_speckle(Image(1000, 1000, 1.0), 1, 29, false);
  const auto m = moments(noisy.pixels());
  EXPECT_NEAR(m.mean, 1.0, 0.01);
  EXPECT_NEAR(m.var, 1.0, 0.03);
}

TEST(Noise, SpeckleFourLooksVariance) {
  const Image noisy = add_speckle(Image(1000, 1000, 1.0), 4, 31, false);
  const auto m = moments(noisy.pixels());
  EXPECT_NEAR(m.mean, 1.0, 0.01);
  EXPECT_NEAR(m.var, 0.25, 0.03 * 0.25);
  for (double v : noisy.pixels()) EXPECT_GT(v, 0.0);
}

TEST(Noise, SpeckleOfZeroIsZero) {
  const Image out = add_speckle(Image(16, 16, 0.0), 3, 1, false);
  for (double v : out.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(Noise, SpeckleRejectsNegativeInput) {
  Image img(4, 4, 1.0);
  img.at(2, 2) = -0.5;
  try {
    (void)add_speckle(img, 1, 1, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NegativeInput);
  }
}

TEST(Noise, SpecValidation) {
  EXPECT_THROW((NoiseSpec{NoiseKind::Gaussian, 0.0, 1, 0, false}.validate()), Error);
  EXPECT_THROW((NoiseSpec{NoiseKind::Speckle, 0.0, 0, 0, false}.validate()), Error);
  EXPECT_NO_THROW((NoiseSpec{NoiseKind::Speckle, 0.0, 2, 0, true}.validate()));
}

TEST(Noise, ClippingBoundsRange) {
  const Image out = add_gaussian(Image(64, 64, 250.0), 30.0, 3, true);
  for (double v : out.pixels()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 255.0);
  }
}

TEST(Noise, GaussianPsnrMatchesSigma) {
  const Image clean(512, 512, 128.0);
  const Image noisy = apply_noise(clean, {NoiseKind::Gaussian, 35.0, 1, 99, false});
  EXPECT_NEAR(psnr(clean, noisy), 20.0 * std::log10(255.0 / 35.0), 0.1);
}

}  // namespace
}  // namespace pba
