#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pba/matrix.hpp"

namespace pba {

/// OMP stopping rule. `max_atoms` caps the support size, `error_tol` is the
/// squared-residual target per sample, `numeric_tol` the zero threshold for
/// correlations and coefficients.
struct CodingParams {
  std::size_t max_atoms = 32;
  double error_tol = 0.0;
  double numeric_tol = 1e-10;

  void validate(std::size_t atom_count) const;
};

struct OmpResult {
  std::vector<std::size_t> support;   // ascending atom indices
  std::vector<double> coefficients;   // aligned with support
  double residual_sq = 0.0;           // ||x - D a||^2 at exit
  std::vector<double> residual_trace; // ||r_t||_2 for t = 0 .. |support|
};

/// Column-wise sparse coefficients for M samples over K atoms.
class SparseCode {
 public:
  SparseCode() = default;
  SparseCode(std::size_t atoms, std::size_t samples);

  [[nodiscard]] std::size_t atoms() const noexcept { return atoms_; }
  [[nodiscard]] std::size_t samples() const noexcept { return support_.size(); }

  [[nodiscard]] std::span<const std::size_t> support(std::size_t m) const noexcept { return support_[m]; }
  [[nodiscard]] std::span<const double> coefficients(std::size_t m) const noexcept { return coef_[m]; }
  [[nodiscard]] std::span<double> coefficients(std::size_t m) noexcept { return coef_[m]; }

  /// Replaces sample m's code. Support must be strictly increasing and < K.
  void set(std::size_t m, std::vector<std::size_t> support, std::vector<double> coefficients);

  /// Removes atom k from sample m's support; no-op when absent.
  void erase(std::size_t m, std::size_t k);

  /// Dense K x M coefficient matrix.
  [[nodiscard]] Matrix to_dense() const;

  /// Renumbers atoms: new index of atom k is new_index[k]; atoms mapped to
  /// `npos` are dropped.
  [[nodiscard]] SparseCode remap_atoms(std::span<const std::size_t> new_index, std::size_t new_atom_count) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const SparseCode&, const SparseCode&) = default;

 private:
  std::size_t atoms_ = 0;
  std::vector<std::vector<std::size_t>> support_;
  std::vector<std::vector<double>> coef_;
};

/// Throws NotNormalized if any column norm deviates from 1 by more than `tol`.
void check_unit_columns(const Matrix& dict, double tol = 1e-6);

/// Orthogonal matching pursuit for one sample.
///
/// Each step adds the atom with the largest |<r, d_k>| (lowest index on
/// ties), then refits all coefficients by least squares on the support via a
/// Cholesky-updated normal-equation solve. Stops when ||r||^2 <= error_tol,
/// the support reaches max_atoms, the best correlation is <= numeric_tol, or
/// a refit fails to strictly reduce the residual.
OmpResult omp_encode(const Matrix& dict, std::span<const double> x, const CodingParams& params);

/// omp_encode applied to every column of X; samples run in parallel and the
/// result is independent of the worker count.
SparseCode batch_encode(const Matrix& dict, const Matrix& x, const CodingParams& params);

/// D * A for a sparse A, column by column.
Matrix reconstruct(const Matrix& dict, const SparseCode& code);

}  // namespace pba
