#include "pba/dictionary_learning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "pba/error.hpp"
#include "pba/random.hpp"

namespace pba {

namespace {

constexpr double kUnitTol = 1e-8;
constexpr double kDuplicateCos = 1.0 - 1e-6;

// Seeded streams; fixed so that seeds keep reproducing the same dictionaries.
constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kRandomAtomStream = 2;

std::vector<double> random_unit(CounterRng& rng, std::size_t n) {
  std::vector<double> v(n);
  double nv = 0.0;
  while (nv == 0.0) {
    for (double& x : v) x = rng.next_normal();
    nv = norm2(v);
  }
  for (double& x : v) x /= nv;
  return v;
}

bool duplicates_any(const Matrix& atoms, std::size_t accepted, std::span<const double> v) {
  for (std::size_t j = 0; j < accepted; ++j)
    if (std::abs(dot(atoms.col(j), v)) > kDuplicateCos) return true;
  return false;
}

}  // namespace

Dictionary::Dictionary(Matrix atoms, bool allow_undercomplete) : atoms_(std::move(atoms)) {
  if (atoms_.cols() == 0 || atoms_.rows() == 0) throw Error(ErrorCode::InvalidArgument, "dictionary is empty");
  if (!allow_undercomplete && atoms_.cols() <= atoms_.rows())
    throw Error(ErrorCode::InvalidArgument, "dictionary must be over-complete (K > N): K=" +
                                                std::to_string(atoms_.cols()) + " N=" + std::to_string(atoms_.rows()));
  check_unit_columns(atoms_, kUnitTol);
}

Dictionary init_dictionary(const Matrix& x, const LearnConfig& cfg) {
  if (x.cols() == 0) throw Error(ErrorCode::EmptyData, "no samples to learn from");
  if (cfg.atoms == 0) throw Error(ErrorCode::InvalidArgument, "atom count must be positive");
  const std::size_t n = x.rows();
  const std::size_t k_atoms = cfg.atoms;
  Matrix atoms(n, k_atoms);
  CounterRng random_atoms(cfg.seed, kRandomAtomStream);

  auto accept_random = [&](std::size_t k) {
    std::vector<double> v = random_unit(random_atoms, n);
    while (duplicates_any(atoms, k, v)) v = random_unit(random_atoms, n);
    std::ranges::copy(v, atoms.col(k).begin());
  };

  if (x.cols() >= k_atoms) {
    // Partial Fisher-Yates: the first K entries of `idx` are the sample.
    std::vector<std::size_t> idx(x.cols());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    CounterRng pick(cfg.seed, kSampleStream);
    for (std::size_t k = 0; k < k_atoms; ++k) {
      const std::size_t j = k + pick.next_below(idx.size() - k);
      std::swap(idx[k], idx[j]);
    }
    for (std::size_t k = 0; k < k_atoms; ++k) {
      auto src = x.col(idx[k]);
      const double ns = norm2(src);
      if (ns == 0.0) {
        accept_random(k);
        continue;
      }
      std::vector<double> v(src.begin(), src.end());
      for (double& e : v) e /= ns;
      if (duplicates_any(atoms, k, v)) {
        accept_random(k);
        continue;
      }
      std::ranges::copy(v, atoms.col(k).begin());
    }
  } else {
    for (std::size_t k = 0; k < k_atoms; ++k) accept_random(k);
  }
  return Dictionary(std::move(atoms), cfg.allow_undercomplete);
}

StepResult ksvd_step(const Dictionary& dict, const Matrix& x, const CodingParams& coding,
                     std::size_t unused_threshold) {
  if (x.rows() != dict.atom_dim())
    throw Error(ErrorCode::DimensionMismatch, "sample dimension != atom dimension");
  const std::size_t n = dict.atom_dim();
  const std::size_t k_atoms = dict.atom_count();
  const std::size_t m_samples = x.cols();

  StepResult out;
  out.code = batch_encode(dict.atoms(), x, coding);
  Matrix atoms = dict.atoms();
  Matrix residual = subtract(x, reconstruct(atoms, out.code));
  out.objective_before = dot(residual.data(), residual.data());

  // users[k] = (sample, position of atom k inside that sample's support)
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> users(k_atoms);
  for (std::size_t m = 0; m < m_samples; ++m) {
    auto s = out.code.support(m);
    for (std::size_t i = 0; i < s.size(); ++i) users[s[i]].emplace_back(m, i);
  }

  std::vector<std::size_t> unused;
  for (std::size_t k = 0; k < k_atoms; ++k) {
    const auto& uk = users[k];
    if (uk.size() <= unused_threshold) unused.push_back(k);
    if (uk.empty()) continue;

    auto dk = atoms.col(k);
    Matrix e(n, uk.size());
    for (std::size_t j = 0; j < uk.size(); ++j) {
      const auto [m, pos] = uk[j];
      const double a = out.code.coefficients(m)[pos];
      auto rm = residual.col(m);
      auto ej = e.col(j);
      for (std::size_t t = 0; t < n; ++t) ej[t] = rm[t] + dk[t] * a;
    }
    if (frobenius_norm(e) == 0.0) continue;

    const Rank1Result r1 = rank1_svd(e);
    std::ranges::copy(r1.left, dk.begin());
    for (std::size_t j = 0; j < uk.size(); ++j) {
      const auto [m, pos] = uk[j];
      const double a = r1.singular_value * r1.right[j];
      out.code.coefficients(m)[pos] = a;
      auto rm = residual.col(m);
      auto ej = e.col(j);
      for (std::size_t t = 0; t < n; ++t) rm[t] = ej[t] - dk[t] * a;
    }
  }

  if (m_samples >= k_atoms && !unused.empty()) {
    std::vector<double> energy(m_samples);
    for (std::size_t m = 0; m < m_samples; ++m) energy[m] = dot(residual.col(m), residual.col(m));
    std::vector<std::size_t> candidates;
    for (std::size_t m = 0; m < m_samples; ++m)
      if (norm2(x.col(m)) > 0.0) candidates.push_back(m);
    std::ranges::stable_sort(candidates, [&](std::size_t a, std::size_t b) { return energy[a] > energy[b]; });

    std::size_t next = 0;
    for (std::size_t k : unused) {
      if (next >= candidates.size()) break;
      const std::size_t m = candidates[next++];
      auto dk = atoms.col(k);
      // Drop the old atom's remaining contributions before overwriting it.
      // Positions in `users` are stale once entries are erased; look up by atom.
      for (const auto& [mm, pos_unused] : users[k]) {
        (void)pos_unused;
        auto s = out.code.support(mm);
        const auto pos = static_cast<std::size_t>(std::ranges::lower_bound(s, k) - s.begin());
        const double a = out.code.coefficients(mm)[pos];
        auto rm = residual.col(mm);
        for (std::size_t t = 0; t < n; ++t) rm[t] += dk[t] * a;
        out.code.erase(mm, k);
      }
      auto src = x.col(m);
      const double ns = norm2(src);
      for (std::size_t t = 0; t < n; ++t) dk[t] = src[t] / ns;
      out.replaced.push_back(k);
    }
  }

  out.objective = dot(residual.data(), residual.data());
  out.dictionary = Dictionary(std::move(atoms), k_atoms <= n);
  return out;
}

LearnResult learn(const Matrix& x, const LearnConfig& cfg) {
  if (cfg.iterations == 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 1");
  LearnResult out;
  out.dictionary = init_dictionary(x, cfg);
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    StepResult step = ksvd_step(out.dictionary, x, cfg.coding, cfg.unused_threshold);
    out.dictionary = std::move(step.dictionary);
    out.code = std::move(step.code);
    out.objective_trace.push_back(step.objective);
  }
  return out;
}

std::string to_pbadict(const Dictionary& dict) {
  std::string s = "PBADICT v1 " + std::to_string(dict.atom_dim()) + " " + std::to_string(dict.atom_count()) + "\n";
  char buf[64];
  for (std::size_t k = 0; k < dict.atom_count(); ++k) {
    auto a = dict.atom(k);
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, a[i]);
      (void)ec;
      if (i) s.push_back(' ');
      s.append(buf, ptr);
    }
    s.push_back('\n');
  }
  return s;
}

Dictionary parse_pbadict(std::string_view text) {
  auto fail = [](const std::string& why) { return Error(ErrorCode::Io, "PBADICT: " + why); };
  std::istringstream in{std::string(text)};
  std::string magic, version;
  std::size_t n = 0, k = 0;
  if (!(in >> magic >> version >> n >> k) || magic != "PBADICT" || version != "v1")
    throw fail("bad header");
  if (n == 0 || k == 0) throw fail("empty dictionary");
  std::vector<double> data;
  data.reserve(n * k);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw fail("bad number '" + tok + "'");
    data.push_back(v);
  }
  if (data.size() != n * k) throw fail("expected " + std::to_string(n * k) + " values");
  return Dictionary(Matrix(n, k, std::move(data)), true);
}

void save_pbadict(const Dictionary& dict, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << to_pbadict(dict);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

Dictionary load_pbadict(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pbadict(ss.str());
}

}  // namespace pba
