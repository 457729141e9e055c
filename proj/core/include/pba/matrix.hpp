#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pba {

/// Dense column-major real matrix.
///
/// Holds patch data (N x M), dictionaries (N x K) and dense coefficient
/// matrices (K x M). Constructing from raw data rejects non-finite entries;
/// element access afterwards is unchecked.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

  [[nodiscard]] std::span<double> col(std::size_t c) noexcept {
    return {data_.data() + c * rows_, rows_};
  }
  [[nodiscard]] std::span<const double> col(std::size_t c) const noexcept {
    return {data_.data() + c * rows_, rows_};
  }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }

  /// Copy of the listed columns, in the listed order.
  [[nodiscard]] Matrix select_cols(std::span<const std::size_t> idx) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Rank1Result {
  std::vector<double> left;
  double singular_value = 0.0;
  std::vector<double> right;
};

struct NormalizedColumns {
  Matrix matrix;
  std::vector<double> scales;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm2(std::span<const double> v) noexcept;
double frobenius_norm(const Matrix& m) noexcept;

/// Number of entries with |v_i| > tol.
std::size_t vector_l0(std::span<const double> v, double tol) noexcept;

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix subtract(const Matrix& a, const Matrix& b);

/// Scale every nonzero column to unit l2 norm. Zero columns stay zero with
/// scale 0; `scales` holds the original norms.
NormalizedColumns normalize_columns(const Matrix& m);

inline constexpr int kRank1MaxIters = 200;
inline constexpr double kRank1ConvTol = 1e-10;

/// Dominant singular triple by power iteration on the smaller Gram matrix
/// (M^T M or M M^T). Starts from the largest-norm column, so results are
/// deterministic. Iteration stops once successive singular value estimates
/// differ by less than conv_tol * sigma. If plain iteration stalls (small
/// spectral gap) the Gram matrix is repeatedly squared, which is the same
/// iteration taken in power-of-two strides.
///
/// The first entry of `left` with magnitude above 1e-12 is nonnegative.
///
/// Throws Error(ZeroMatrix) when ||M||_F == 0.
Rank1Result rank1_svd(const Matrix& m, int max_iters = kRank1MaxIters,
                      double conv_tol = kRank1ConvTol);

}  // namespace pba
