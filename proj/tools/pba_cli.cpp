// pba: batch front end for principal-basis denoising, despeckling and
// reproducibility reporting.
//
// Exit codes: 0 ok, 2 usage, 3 I/O, 4 numeric failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pba/dictionary_learning.hpp"
#include "pba/error.hpp"
#include "pba/image_io.hpp"
#include "pba/metrics.hpp"
#include "pba/noise.hpp"
#include "pba/pipeline.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(pba::ErrorCode code) {
  switch (code) {
    case pba::ErrorCode::Io: return kExitIo;
    case pba::ErrorCode::InvalidArgument:
    case pba::ErrorCode::GeometryMismatch:
    case pba::ErrorCode::BadP: return kExitUsage;
    default: return kExitNumeric;
  }
}

struct RunFlags {
  pba::RunConfig cfg;
  double sigma = 0.0;
  double gamma = 0.0;
  std::string truncation = "pba";
  std::string gamma_policy = "auto";
  bool no_timings = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--patch-side", f.cfg.patch_side, "Patch side in pixels")->capture_default_str();
  cmd->add_option("--stride", f.cfg.stride, "Patch grid stride in pixels")->capture_default_str();
  cmd->add_option("-K,--atoms", f.cfg.atoms, "Dictionary size K")->capture_default_str();
  cmd->add_option("--iterations", f.cfg.iterations, "K-SVD iterations")->capture_default_str();
  cmd->add_option("--max-atoms", f.cfg.max_atoms, "OMP sparsity cap per patch")->capture_default_str();
  cmd->add_option("--error-gain", f.cfg.error_gain, "epsilon = N (gain * sigma)^2")->capture_default_str();
  cmd->add_option("--sigma", f.sigma, "Noise standard deviation (estimated when omitted)");
  cmd->add_option("--gamma-policy", f.gamma_policy, "auto (30/sigma) or fixed")
      ->check(CLI::IsMember({"auto", "fixed"}))
      ->capture_default_str();
  cmd->add_option("--gamma", f.gamma, "Fidelity weight; implies --gamma-policy fixed");
  cmd->add_option("--truncation", f.truncation, "pba, none or fixed-p")
      ->check(CLI::IsMember({"pba", "none", "fixed-p"}))
      ->capture_default_str();
  cmd->add_option("--fixed-p", f.cfg.fixed_p, "P for --truncation fixed-p");
  cmd->add_option("--seed", f.cfg.seed, "Seed for dictionary initialisation")->capture_default_str();
  cmd->add_option("--unused-threshold", f.cfg.unused_threshold, "Re-seed atoms used at most this often")
      ->capture_default_str();
  cmd->add_flag("--remove-dc", f.cfg.remove_dc, "Subtract patch means before learning");
  cmd->add_option("--numeric-tol", f.cfg.numeric_tol, "Zero threshold for coefficients")->capture_default_str();
  cmd->add_flag("--no-timings", f.no_timings, "Omit wall-clock timings from the report");
}

pba::RunConfig finish(const CLI::App* cmd, RunFlags& f) {
  pba::RunConfig cfg = f.cfg;
  if (cmd->count("--sigma")) cfg.sigma = f.sigma;
  cfg.gamma_policy = f.gamma_policy == "fixed" ? pba::GammaPolicy::Fixed : pba::GammaPolicy::Auto;
  if (cmd->count("--gamma")) {
    cfg.gamma_policy = pba::GammaPolicy::Fixed;
    cfg.gamma = f.gamma;
  }
  if (f.truncation == "none") cfg.truncation = pba::Truncation::None;
  else if (f.truncation == "fixed-p") cfg.truncation = pba::Truncation::FixedP;
  else cfg.truncation = pba::Truncation::Pba;
  cfg.report_timings = !f.no_timings;
  return cfg;
}

pba::PgmFormat parse_format(const std::string& s) {
  return s == "plain" ? pba::PgmFormat::Plain : pba::PgmFormat::Binary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Principal basis analysis: sparse-dictionary denoising with reproducibility-ranked atoms"};
  app.require_subcommand(1);

  std::string input, output, report, format = "binary";

  RunFlags denoise_flags;
  auto* denoise = app.add_subcommand("denoise", "Denoise a PGM image with the principal basis");
  denoise->add_option("-i,--input", input, "Noisy PGM")->required();
  denoise->add_option("-o,--output", output, "Denoised PGM")->required();
  denoise->add_option("--report", report, "JSON report (default: <output>.json)");
  denoise->add_option("--format", format, "Output PGM flavour")->check(CLI::IsMember({"plain", "binary"}));
  add_run_flags(denoise, denoise_flags);

  RunFlags despeckle_flags;
  auto* despeckle = app.add_subcommand("despeckle", "Despeckle an intensity PGM image");
  despeckle->add_option("-i,--input", input, "Speckled PGM")->required();
  despeckle->add_option("-o,--output", output, "Despeckled PGM")->required();
  despeckle->add_option("--report", report, "JSON report (default: <output>.json)");
  despeckle->add_option("--format", format, "Output PGM flavour")->check(CLI::IsMember({"plain", "binary"}));
  despeckle->add_option("--looks", despeckle_flags.cfg.looks, "Number of looks L")->capture_default_str();
  add_run_flags(despeckle, despeckle_flags);

  RunFlags rank_flags;
  std::string prefix;
  auto* rank = app.add_subcommand("rank", "Rank atoms by reproducibility and choose P");
  rank->add_option("-i,--input", input, "Input PGM")->required();
  rank->add_option("--out-prefix", prefix, "Writes <prefix>.csv, <prefix>.pbadict, <prefix>.json")->required();
  add_run_flags(rank, rank_flags);

  std::string kind = "gaussian";
  double noise_sigma = 0.0;
  unsigned noise_looks = 1;
  std::uint64_t noise_seed = 0;
  bool no_clip = false;
  auto* noisegen = app.add_subcommand("noisegen", "Corrupt a clean PGM with seeded noise");
  noisegen->add_option("-i,--input", input, "Clean PGM")->required();
  noisegen->add_option("-o,--output", output, "Noisy PGM")->required();
  noisegen->add_option("--kind", kind, "gaussian or speckle")->check(CLI::IsMember({"gaussian", "speckle"}));
  noisegen->add_option("--sigma", noise_sigma, "Gaussian standard deviation");
  noisegen->add_option("--looks", noise_looks, "Speckle looks");
  noisegen->add_option("--seed", noise_seed, "Noise seed")->required();
  noisegen->add_flag("--no-clip", no_clip, "Do not clamp to [0, 255] before quantisation");
  noisegen->add_option("--format", format, "Output PGM flavour")->check(CLI::IsMember({"plain", "binary"}));

  std::string reference, test, json_out;
  pba::MetricConfig metric;
  auto* eval = app.add_subcommand("eval", "PSNR and SSIM of a test image against a reference");
  eval->add_option("-r,--reference", reference, "Reference PGM")->required();
  eval->add_option("-t,--test", test, "Test PGM")->required();
  eval->add_option("--json", json_out, "Also write the JSON result here");
  eval->add_option("--peak", metric.peak, "Peak value")->capture_default_str();
  eval->add_option("--ssim-window", metric.ssim_window, "SSIM window (odd)")->capture_default_str();
  eval->add_option("--ssim-sigma", metric.ssim_sigma, "SSIM Gaussian sigma")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    const auto fmt = parse_format(format);
    if (*denoise || *despeckle) {
      const bool is_denoise = static_cast<bool>(*denoise);
      auto* cmd = is_denoise ? denoise : despeckle;
      pba::RunConfig cfg = finish(cmd, is_denoise ? denoise_flags : despeckle_flags);
      const pba::Image noisy = pba::read_pgm(input);
      const pba::DenoiseResult r = is_denoise ? pba::run_denoise(noisy, cfg) : pba::run_despeckle(noisy, cfg);
      pba::write_pgm(r.image, output, fmt);
      pba::write_file(report.empty() ? output + ".json" : report, r.report_json);
      std::cout << "P=" << r.p << " K=" << r.atoms << " sigma=" << r.sigma << " gamma=" << r.gamma << "\n";
    } else if (*rank) {
      pba::RunConfig cfg = finish(rank, rank_flags);
      const pba::RankResult r = pba::run_rank(pba::read_pgm(input), cfg);
      pba::write_file(prefix + ".csv", r.csv);
      pba::save_pbadict(r.dictionary, prefix + ".pbadict");
      pba::write_file(prefix + ".json", r.report_json);
      std::cout << "P=" << r.p << "\n";
    } else if (*noisegen) {
      pba::NoiseSpec spec;
      spec.kind = kind == "speckle" ? pba::NoiseKind::Speckle : pba::NoiseKind::Gaussian;
      spec.sigma = noise_sigma;
      spec.looks = noise_looks;
      spec.seed = noise_seed;
      spec.clip = !no_clip;
      pba::write_pgm(pba::apply_noise(pba::read_pgm(input), spec), output, fmt);
    } else if (*eval) {
      const pba::Image ref = pba::read_pgm(reference);
      const pba::Image tst = pba::read_pgm(test);
      const std::string j = pba::eval_json(pba::psnr(ref, tst, metric), pba::ssim(ref, tst, metric));
      std::cout << j;
      if (!json_out.empty()) pba::write_file(json_out, j);
    }
  } catch (const pba::Error& e) {
    std::cerr << "pba: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "pba: " << e.what() << "\n";
    return kExitNumeric;
  }
  return 0;
}
