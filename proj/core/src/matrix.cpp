#include "pba/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pba/error.hpp"

namespace pba {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "matrix data length " + std::to_string(data_.size()) +
                                                  " != " + std::to_string(rows_) + "x" +
                                                  std::to_string(cols_));
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); })) {
    throw Error(ErrorCode::InvalidArgument, "matrix data contains non-finite values");
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
  Matrix out(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= cols_) throw Error(ErrorCode::InvalidArgument, "column index out of range");
    std::ranges::copy(col(idx[j]), out.col(j).begin());
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) noexcept { return std::sqrt(dot(v, v)); }

double frobenius_norm(const Matrix& m) noexcept { return norm2(m.data()); }

std::size_t vector_l0(std::span<const double> v, double tol) noexcept {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [tol](double x) { return std::abs(x) > tol; }));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "multiply: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      auto ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "subtract: shapes differ");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] -= bd[i];
  return c;
}

NormalizedColumns normalize_columns(const Matrix& m) {
  NormalizedColumns out{m, std::vector<double>(m.cols(), 0.0)};
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto c = out.matrix.col(j);
    const double n = norm2(c);
    out.scales[j] = n;
    if (n == 0.0) continue;
    for (double& x : c) x /= n;
  }
  return out;
}

namespace {

// Symmetric s x s Gram matrix: M M^T when `of_rows`, else M^T M.
Matrix gram(const Matrix& m, bool of_rows) {
  if (of_rows) {
    Matrix g(m.rows(), m.rows());
    for (std::size_t c = 0; c < m.cols(); ++c) {
      auto mc = m.col(c);
      for (std::size_t j = 0; j < m.rows(); ++j) {
        const double mj = mc[j];
        if (mj == 0.0) continue;
        auto gj = g.col(j);
        for (std::size_t i = 0; i < m.rows(); ++i) gj[i] += mc[i] * mj;
      }
    }
    return g;
  }
  Matrix g(m.cols(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      const double v = dot(m.col(i), m.col(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

std::vector<double> gram_apply(const Matrix& g, std::span<const double> v) {
  std::vector<double> w(g.rows(), 0.0);
  for (std::size_t j = 0; j < g.cols(); ++j) {
    const double vj = v[j];
    if (vj == 0.0) continue;
    auto gj = g.col(j);
    for (std::size_t i = 0; i < g.rows(); ++i) w[i] += gj[i] * vj;
  }
  return w;
}

// G <- G*G / ||G*G||_max, keeping the dominant eigenvector and widening the gap.
Matrix square_scaled(const Matrix& g) {
  Matrix sq = multiply(g, g);
  double scale = 0.0;
  for (double x : sq.data()) scale = std::max(scale, std::abs(x));
  if (scale > 0.0)
    for (double& x : sq.data()) x /= scale;
  return sq;
}

}  // namespace

Rank1Result rank1_svd(const Matrix& m, int max_iters, double conv_tol) {
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "rank1_svd: max_iters must be >= 1");
  if (m.empty() || frobenius_norm(m) == 0.0) throw Error(ErrorCode::ZeroMatrix, "rank1_svd: zero matrix");

  const bool iterate_left = m.rows() <= m.cols();
  const Matrix g = gram(m, iterate_left);
  const std::size_t s = g.rows();

  std::size_t start_col = 0;
  double best = -1.0;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const double n = norm2(m.col(c));
    if (n > best) {
      best = n;
      start_col = c;
    }
  }
  std::vector<double> v;
  if (iterate_left) {
    v.assign(m.col(start_col).begin(), m.col(start_col).end());
  } else {
    v.resize(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) v[c] = dot(m.col(c), m.col(start_col));
  }
  double nv = norm2(v);
  for (double& x : v) x /= nv;

  // Squaring costs s^3 per step; for tiny Gram matrices it is cheaper than
  // waiting out a slow gap, for larger ones only after plain steps stall.
  const int plain_steps = s <= 16 ? 1 : 8;
  Matrix op = g;
  double sigma_prev = std::sqrt(std::max(dot(v, gram_apply(g, v)), 0.0));
  for (int it = 1; it <= max_iters; ++it) {
    std::vector<double> w = gram_apply(op, v);
    const double nw = norm2(w);
    if (nw == 0.0) break;
    for (std::size_t i = 0; i < s; ++i) v[i] = w[i] / nw;
    const double sigma = std::sqrt(std::max(dot(v, gram_apply(g, v)), 0.0));
    if (std::abs(sigma - sigma_prev) < conv_tol * sigma) break;
    sigma_prev = sigma;
    if (it >= plain_steps) op = square_scaled(op);
  }

  Rank1Result r;
  if (iterate_left) {
    r.left = std::move(v);
    r.right.resize(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) r.right[c] = dot(m.col(c), r.left);
    r.singular_value = norm2(r.right);
    for (double& x : r.right) x /= r.singular_value;
    const double nl = norm2(r.left);
    for (double& x : r.left) x /= nl;
  } else {
    r.right = std::move(v);
    r.left.assign(m.rows(), 0.0);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const double rc = r.right[c];
      auto mc = m.col(c);
      for (std::size_t i = 0; i < m.rows(); ++i) r.left[i] += mc[i] * rc;
    }
    r.singular_value = norm2(r.left);
    for (double& x : r.left) x /= r.singular_value;
    const double nr = norm2(r.right);
    for (double& x : r.right) x /= nr;
  }

  auto first = std::ranges::find_if(r.left, [](double x) { return std::abs(x) > 1e-12; });
  if (first != r.left.end() && *first < 0.0) {
    for (double& x : r.left) x = -x;
    for (double& x : r.right) x = -x;
  }
  return r;
}

}  // namespace pba
