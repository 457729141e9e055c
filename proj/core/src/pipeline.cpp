#include "pba/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "pba/error.hpp"
#include "pba/sparse_coding.hpp"

namespace pba {

using nlohmann::ordered_json;

const char* to_string(Truncation t) noexcept {
  switch (t) {
    case Truncation::Pba: return "pba";
    case Truncation::None: return "none";
    case Truncation::FixedP: return "fixed-p";
  }
  return "?";
}

const char* to_string(GammaPolicy g) noexcept { return g == GammaPolicy::Auto ? "auto" : "fixed"; }

double estimate_noise_sigma(const Image& img) {
  const std::size_t bw = img.width() / 2;
  const std::size_t bh = img.height() / 2;
  if (bw == 0 || bh == 0) throw Error(ErrorCode::TooSmall, "noise estimate needs at least 2x2 pixels");
  std::vector<double> hh;
  hh.reserve(bw * bh);
  for (std::size_t y = 0; y < bh; ++y)
    for (std::size_t x = 0; x < bw; ++x) {
      const double a = img.at(2 * x, 2 * y);
      const double b = img.at(2 * x + 1, 2 * y);
      const double c = img.at(2 * x, 2 * y + 1);
      const double d = img.at(2 * x + 1, 2 * y + 1);
      hh.push_back(std::abs(a - b - c + d) / 2.0);
    }
  const auto mid = hh.begin() + static_cast<std::ptrdiff_t>(hh.size() / 2);
  std::nth_element(hh.begin(), mid, hh.end());
  double med = *mid;
  if (hh.size() % 2 == 0) {
    const double lower = *std::max_element(hh.begin(), mid);
    med = 0.5 * (med + lower);
  }
  return med / 0.6744897501960817;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void check_config(const RunConfig& cfg) {
  if (cfg.iterations == 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  if (cfg.max_atoms == 0) throw Error(ErrorCode::InvalidArgument, "max-atoms must be >= 1");
  if (!(cfg.error_gain >= 0.0)) throw Error(ErrorCode::InvalidArgument, "error-gain must be >= 0");
  if (cfg.sigma && !(*cfg.sigma >= 0.0 && std::isfinite(*cfg.sigma)))
    throw Error(ErrorCode::InvalidArgument, "sigma must be finite and >= 0");
  if (cfg.gamma_policy == GammaPolicy::Fixed && !(cfg.gamma >= 0.0 && std::isfinite(cfg.gamma)))
    throw Error(ErrorCode::InvalidArgument, "gamma must be finite and >= 0");
  if (cfg.looks == 0) throw Error(ErrorCode::InvalidArgument, "looks must be >= 1");
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["patch_side"] = cfg.patch_side;
  j["stride"] = cfg.stride;
  j["atoms"] = cfg.atoms;
  j["iterations"] = cfg.iterations;
  j["max_atoms"] = cfg.max_atoms;
  j["error_gain"] = cfg.error_gain;
  j["sigma"] = cfg.sigma ? ordered_json(*cfg.sigma) : ordered_json(nullptr);
  j["looks"] = cfg.looks;
  j["gamma_policy"] = to_string(cfg.gamma_policy);
  j["gamma"] = cfg.gamma;
  j["truncation"] = to_string(cfg.truncation);
  j["fixed_p"] = cfg.fixed_p;
  j["seed"] = cfg.seed;
  j["unused_threshold"] = cfg.unused_threshold;
  j["remove_dc"] = cfg.remove_dc;
  j["numeric_tol"] = cfg.numeric_tol;
  return j;
}

struct NoiseLevel {
  double sigma;
  std::string source;
};

// Shared front half: patches, learning, ranking and the choice of P.
struct Stage {
  PatchGeometry geom;
  Matrix patches;
  std::vector<double> dc;  // per-patch means when remove_dc
  CodingParams coding;
  double epsilon = 0.0;
  LearnResult learned;
  UsageProfile profile;
  AtomRanking ranking;
  std::size_t p = 0;
  ordered_json timings = ordered_json::object();
};

Stage learn_and_rank(const Image& img, const RunConfig& cfg, const NoiseLevel& noise) {
  check_config(cfg);
  Stage st;
  auto t0 = Clock::now();
  st.geom = PatchGeometry::for_image(img, cfg.patch_side, cfg.stride);
  st.patches = extract_patches(img, st.geom);
  if (cfg.remove_dc) {
    st.dc.resize(st.patches.cols());
    for (std::size_t m = 0; m < st.patches.cols(); ++m) {
      auto c = st.patches.col(m);
      double mean = 0.0;
      for (double v : c) mean += v;
      mean /= static_cast<double>(c.size());
      for (double& v : c) v -= mean;
      st.dc[m] = mean;
    }
  }
  st.timings["extract_ms"] = ms_since(t0);

  const double n = static_cast<double>(st.geom.patch_dim());
  st.epsilon = n * (cfg.error_gain * noise.sigma) * (cfg.error_gain * noise.sigma);
  st.coding.max_atoms = std::min(cfg.max_atoms, cfg.atoms);
  st.coding.error_tol = st.epsilon;
  st.coding.numeric_tol = cfg.numeric_tol;

  LearnConfig lc;
  lc.atoms = cfg.atoms;
  lc.iterations = cfg.iterations;
  lc.coding = st.coding;
  lc.seed = cfg.seed;
  lc.unused_threshold = cfg.unused_threshold;
  t0 = Clock::now();
  st.learned = learn(st.patches, lc);
  st.timings["learn_ms"] = ms_since(t0);

  t0 = Clock::now();
  st.profile = usage_profile(st.learned.code, cfg.numeric_tol);
  st.ranking = rank_atoms(st.profile);
  switch (cfg.truncation) {
    case Truncation::Pba: st.p = select_p(st.ranking); break;
    case Truncation::None: st.p = cfg.atoms; break;
    case Truncation::FixedP:
      if (cfg.fixed_p < 1 || cfg.fixed_p > cfg.atoms)
        throw Error(ErrorCode::BadP, "fixed P=" + std::to_string(cfg.fixed_p) + " outside [1, " +
                                         std::to_string(cfg.atoms) + "]");
      st.p = cfg.fixed_p;
      break;
  }
  st.timings["rank_ms"] = ms_since(t0);
  return st;
}

ordered_json base_report(const char* command, const Image& img, const RunConfig& cfg, const Stage& st,
                         const NoiseLevel& noise) {
  ordered_json j;
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["image"] = {{"width", img.width()}, {"height", img.height()}};
  j["atom_dim"] = st.geom.patch_dim();
  j["patches"] = st.geom.patch_count();
  j["K"] = cfg.atoms;
  j["P"] = st.p;
  j["sigma"] = noise.sigma;
  j["sigma_source"] = noise.source;
  j["epsilon"] = st.epsilon;
  j["objective_trace"] = st.learned.objective_trace;
  return j;
}

DenoiseResult denoise_with(const Image& noisy, const RunConfig& cfg, const NoiseLevel& noise,
                           const char* command) {
  const auto t_total = Clock::now();
  Stage st = learn_and_rank(noisy, cfg, noise);

  auto t0 = Clock::now();
  DenoiseResult out;
  Dictionary recode_dict;
  if (cfg.truncation == Truncation::None) {
    recode_dict = st.learned.dictionary;
    out.recoding_atoms.resize(cfg.atoms);
    for (std::size_t k = 0; k < cfg.atoms; ++k) out.recoding_atoms[k] = k;
  } else {
    PrincipalBasis basis = principal_basis(st.learned.dictionary, st.ranking, st.p);
    recode_dict = std::move(basis.dictionary);
    out.recoding_atoms = std::move(basis.provenance);
  }
  CodingParams recoding = st.coding;
  recoding.max_atoms = std::min(recoding.max_atoms, recode_dict.atom_count());
  const SparseCode code = batch_encode(recode_dict.atoms(), st.patches, recoding);
  Matrix estimate = reconstruct(recode_dict.atoms(), code);
  if (cfg.remove_dc) {
    for (std::size_t m = 0; m < estimate.cols(); ++m)
      for (double& v : estimate.col(m)) v += st.dc[m];
  }
  st.timings["recode_ms"] = ms_since(t0);

  out.gamma = cfg.gamma_policy == GammaPolicy::Fixed ? cfg.gamma : (noise.sigma > 0.0 ? 30.0 / noise.sigma : 1.0);
  t0 = Clock::now();
  out.image = reassemble(estimate, noisy, st.geom, out.gamma);
  st.timings["reassemble_ms"] = ms_since(t0);
  st.timings["total_ms"] = ms_since(t_total);

  out.atoms = cfg.atoms;
  out.p = st.p;
  out.sigma = noise.sigma;
  out.sigma_source = noise.source;
  out.epsilon = st.epsilon;
  out.objective_trace = st.learned.objective_trace;
  out.profile = std::move(st.profile);
  out.ranking = std::move(st.ranking);

  ordered_json j = base_report(command, noisy, cfg, st, noise);
  j["gamma"] = out.gamma;
  j["recoding_atoms"] = out.recoding_atoms;
  if (cfg.report_timings) j["timings"] = st.timings;
  out.report_json = j.dump(2) + "\n";
  return out;
}

NoiseLevel resolve_sigma(const Image& img, const RunConfig& cfg) {
  if (cfg.sigma) return {*cfg.sigma, "given"};
  return {estimate_noise_sigma(img), "estimated"};
}

}  // namespace

DenoiseResult run_denoise(const Image& noisy, const RunConfig& cfg) {
  return denoise_with(noisy, cfg, resolve_sigma(noisy, cfg), "denoise");
}

DenoiseResult run_despeckle(const Image& noisy, const RunConfig& cfg) {
  check_config(cfg);
  if (std::ranges::any_of(noisy.pixels(), [](double v) { return v < 0.0; }))
    throw Error(ErrorCode::NegativeInput, "despeckle needs nonnegative intensities");
  NoiseLevel noise;
  if (cfg.sigma) {
    noise = {*cfg.sigma, "given"};
  } else {
    double mean = 0.0;
    for (double v : noisy.pixels()) mean += v;
    mean /= static_cast<double>(std::max<std::size_t>(1, noisy.size()));
    noise = {mean / std::sqrt(static_cast<double>(cfg.looks)), "speckle-equivalent"};
  }
  return denoise_with(noisy, cfg, noise, "despeckle");
}

RankResult run_rank(const Image& img, const RunConfig& cfg) {
  const auto t_total = Clock::now();
  const NoiseLevel noise = resolve_sigma(img, cfg);
  Stage st = learn_and_rank(img, cfg, noise);
  st.timings["total_ms"] = ms_since(t_total);

  RankResult out;
  out.p = st.p;
  out.rows = reproducibility_report(st.profile, st.ranking, st.p);
  out.csv = report_csv(out.rows);
  out.sigma = noise.sigma;
  out.sigma_source = noise.source;
  out.epsilon = st.epsilon;
  out.objective_trace = st.learned.objective_trace;

  ordered_json j = base_report("rank", img, cfg, st, noise);
  std::size_t max_l0 = 0;
  for (std::size_t c : st.profile.l0_count) max_l0 = std::max(max_l0, c);
  j["max_l0_count"] = max_l0;
  if (cfg.report_timings) j["timings"] = st.timings;
  out.report_json = j.dump(2) + "\n";

  out.dictionary = std::move(st.learned.dictionary);
  out.profile = std::move(st.profile);
  out.ranking = std::move(st.ranking);
  return out;
}

std::string eval_json(double psnr_db, double ssim_value) {
  ordered_json j;
  j["psnr"] = std::isinf(psnr_db) ? ordered_json("inf") : ordered_json(psnr_db);
  j["ssim"] = ssim_value;
  return j.dump(2) + "\n";
}

}  // namespace pba
