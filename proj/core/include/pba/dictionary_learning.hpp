#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pba/matrix.hpp"
#include "pba/sparse_coding.hpp"

namespace pba {

/// N x K matrix of unit-norm atoms (tolerance 1e-8). Over-complete (K > N)
/// unless constructed with `allow_undercomplete`.
class Dictionary {
 public:
  Dictionary() = default;
  explicit Dictionary(Matrix atoms, bool allow_undercomplete = false);

  [[nodiscard]] const Matrix& atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t atom_count() const noexcept { return atoms_.cols(); }
  [[nodiscard]] std::size_t atom_dim() const noexcept { return atoms_.rows(); }
  [[nodiscard]] std::span<const double> atom(std::size_t k) const noexcept { return atoms_.col(k); }

  friend bool operator==(const Dictionary&, const Dictionary&) = default;

 private:
  Matrix atoms_;
};

struct LearnConfig {
  std::size_t atoms = 256;
  std::size_t iterations = 10;
  CodingParams coding;
  std::uint64_t seed = 0;
  std::size_t unused_threshold = 0;
  bool allow_undercomplete = false;
};

/// K distinct data columns drawn without replacement (seeded), normalised.
/// Zero columns and near-duplicates (|cos| > 1 - 1e-6 against an accepted
/// atom) are replaced by seeded random unit vectors. With fewer samples than
/// atoms every atom is a seeded random unit vector.
///
/// Throws EmptyData when X has no columns.
Dictionary init_dictionary(const Matrix& x, const LearnConfig& cfg);

struct StepResult {
  Dictionary dictionary;
  SparseCode code;
  double objective_before = 0.0;  // ||X - D A||_F^2 right after coding
  double objective = 0.0;         // ||X - D A||_F^2 after the step
  std::vector<std::size_t> replaced;  // atoms re-seeded from data
};

/// One K-SVD iteration: code X with OMP, sweep atoms in ascending order
/// replacing each used atom and its coefficient row by the dominant singular
/// pair of its restricted residual, then re-seed atoms with usage <=
/// unused_threshold from the worst-represented samples (largest residual,
/// lowest index on ties, each sample at most once).
///
/// Re-seeding only happens when M >= K: with fewer samples than atoms the
/// data cannot keep every atom alive and re-seeding would just copy samples
/// into the dictionary.
StepResult ksvd_step(const Dictionary& dict, const Matrix& x, const CodingParams& coding,
                     std::size_t unused_threshold = 0);

struct LearnResult {
  Dictionary dictionary;
  SparseCode code;
  std::vector<double> objective_trace;
};

/// init_dictionary followed by cfg.iterations K-SVD steps.
LearnResult learn(const Matrix& x, const LearnConfig& cfg);

/// Text format: "PBADICT v1 N K" then one atom per line (N values, shortest
/// round-trip decimal representation).
std::string to_pbadict(const Dictionary& dict);
Dictionary parse_pbadict(std::string_view text);
void save_pbadict(const Dictionary& dict, const std::filesystem::path& path);
Dictionary load_pbadict(const std::filesystem::path& path);

}  // namespace pba
