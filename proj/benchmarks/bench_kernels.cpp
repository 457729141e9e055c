#include <benchmark/benchmark.h>

#include "pba/dictionary_learning.hpp"
#include "pba/metrics.hpp"
#include "pba/noise.hpp"
#include "pba/patch_grid.hpp"
#include "pba/random.hpp"
#include "pba/sparse_coding.hpp"

namespace {

pba::Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  pba::CounterRng rng(seed);
  pba::Matrix m(rows, cols);
  for (double& v : m.data()) v = rng.next_normal();
  return m;
}

void BM_Rank1Svd(benchmark::State& state) {
  const auto m = gaussian(64, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(pba::rank1_svd(m));
}
BENCHMARK(BM_Rank1Svd)->Arg(16)->Arg(256)->Arg(4096);

void BM_OmpEncode(benchmark::State& state) {
  const auto dict = pba::normalize_columns(gaussian(64, 256, 2)).matrix;
  const auto x = gaussian(64, 1, 3);
  const pba::CodingParams params{static_cast<std::size_t>(state.range(0)), 0.0, 1e-10};
  for (auto _ : state) benchmark::DoNotOptimize(pba::omp_encode(dict, x.col(0), params));
}
BENCHMARK(BM_OmpEncode)->Arg(4)->Arg(16)->Arg(32);

void BM_KsvdStep(benchmark::State& state) {
  const auto x = gaussian(64, static_cast<std::size_t>(state.range(0)), 4);
  pba::LearnConfig cfg;
  cfg.seed = 1;
  cfg.coding.max_atoms = 8;
  const auto dict = pba::init_dictionary(x, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(pba::ksvd_step(dict, x, cfg.coding));
}
BENCHMARK(BM_KsvdStep)->Arg(512)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_ExtractPatches(benchmark::State& state) {
  const pba::Image img(256, 256, 100.0);
  const auto geom = pba::PatchGeometry::for_image(img, 8, 1);
  for (auto _ : state) benchmark::DoNotOptimize(pba::extract_patches(img, geom));
}
BENCHMARK(BM_ExtractPatches)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pba::Image a(n, n, 100.0);
  const pba::Image b = pba::add_gaussian(a, 20.0, 5, false);
  for (auto _ : state) benchmark::DoNotOptimize(pba::ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
