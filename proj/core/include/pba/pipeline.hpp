#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pba/dictionary_learning.hpp"
#include "pba/patch_grid.hpp"
#include "pba/principal_basis.hpp"

namespace pba {

enum class Truncation { Pba, None, FixedP };
enum class GammaPolicy { Auto, Fixed };

const char* to_string(Truncation t) noexcept;
const char* to_string(GammaPolicy g) noexcept;

/// Every tunable of a denoise / despeckle / rank run. Defaults give 8x8
/// patches and 256 atoms (a 64 x 256 dictionary).
struct RunConfig {
  std::size_t patch_side = 8;
  std::size_t stride = 1;
  std::size_t atoms = 256;
  std::size_t iterations = 10;
  std::size_t max_atoms = 32;
  /// epsilon = N * (error_gain * sigma)^2 per patch.
  double error_gain = 1.15;
  /// Noise standard deviation when known. Unset: estimated from the image
  /// (denoise, rank) or derived from the speckle looks (despeckle).
  std::optional<double> sigma;
  unsigned looks = 1;
  /// Auto: gamma = 30 / sigma (1 when sigma is 0). Fixed: `gamma`.
  GammaPolicy gamma_policy = GammaPolicy::Auto;
  double gamma = 1.0;
  Truncation truncation = Truncation::Pba;
  std::size_t fixed_p = 0;
  std::uint64_t seed = 0;
  std::size_t unused_threshold = 0;
  bool remove_dc = false;
  double numeric_tol = 1e-10;
  /// Wall-clock timings make reports non-reproducible; switch off to compare
  /// report bytes across runs.
  bool report_timings = true;
};

struct DenoiseResult {
  Image image;
  std::size_t atoms = 0;  // K
  std::size_t p = 0;      // atoms used for recoding
  double sigma = 0.0;
  std::string sigma_source;
  double epsilon = 0.0;
  double gamma = 0.0;
  std::vector<double> objective_trace;
  std::vector<std::size_t> recoding_atoms;  // original indices, recoding order
  UsageProfile profile;
  AtomRanking ranking;
  std::string report_json;
};

struct RankResult {
  Dictionary dictionary;
  UsageProfile profile;
  AtomRanking ranking;
  std::size_t p = 0;
  std::vector<ReportRow> rows;
  std::string csv;
  double sigma = 0.0;
  std::string sigma_source;
  double epsilon = 0.0;
  std::vector<double> objective_trace;
  std::string report_json;
};

/// Robust noise level: median absolute diagonal Haar detail / 0.6745.
double estimate_noise_sigma(const Image& img);

/// Learn on the noisy patches, rank atoms by reproducibility, truncate to
/// the principal basis, recode every patch against it, and reassemble.
DenoiseResult run_denoise(const Image& noisy, const RunConfig& cfg);

/// run_denoise on intensity data with sigma = mean intensity / sqrt(looks)
/// unless cfg.sigma is set.
DenoiseResult run_despeckle(const Image& noisy, const RunConfig& cfg);

/// Learning and ranking only; produces the reproducibility CSV.
RankResult run_rank(const Image& img, const RunConfig& cfg);

/// {"psnr": ..., "ssim": ...}; an infinite PSNR is written as "inf".
std::string eval_json(double psnr_db, double ssim_value);

}  // namespace pba
