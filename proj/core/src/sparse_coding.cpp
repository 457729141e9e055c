#include "pba/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pba/error.hpp"
#include "pba/parallel.hpp"

namespace pba {

void CodingParams::validate(std::size_t atom_count) const {
  if (max_atoms == 0) throw Error(ErrorCode::InvalidArgument, "max_atoms must be positive");
  if (max_atoms > atom_count)
    throw Error(ErrorCode::InvalidArgument, "max_atoms " + std::to_string(max_atoms) + " exceeds atom count " +
                                                std::to_string(atom_count));
  if (!(error_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "error_tol must be nonnegative");
  if (!(numeric_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "numeric_tol must be positive");
}

SparseCode::SparseCode(std::size_t atoms, std::size_t samples)
    : atoms_(atoms), support_(samples), coef_(samples) {}

void SparseCode::set(std::size_t m, std::vector<std::size_t> support, std::vector<double> coefficients) {
  if (m >= samples()) throw Error(ErrorCode::InvalidArgument, "sample index out of range");
  if (support.size() != coefficients.size())
    throw Error(ErrorCode::DimensionMismatch, "support and coefficients differ in length");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] >= atoms_) throw Error(ErrorCode::InvalidArgument, "atom index out of range");
    if (i > 0 && support[i] <= support[i - 1])
      throw Error(ErrorCode::InvalidArgument, "support must be strictly increasing");
  }
  support_[m] = std::move(support);
  coef_[m] = std::move(coefficients);
}

void SparseCode::erase(std::size_t m, std::size_t k) {
  auto& s = support_[m];
  auto it = std::ranges::lower_bound(s, k);
  if (it == s.end() || *it != k) return;
  const auto pos = it - s.begin();
  s.erase(it);
  coef_[m].erase(coef_[m].begin() + pos);
}

Matrix SparseCode::to_dense() const {
  Matrix a(atoms_, samples());
  for (std::size_t m = 0; m < samples(); ++m)
    for (std::size_t i = 0; i < support_[m].size(); ++i) a(support_[m][i], m) = coef_[m][i];
  return a;
}

SparseCode SparseCode::remap_atoms(std::span<const std::size_t> new_index, std::size_t new_atom_count) const {
  if (new_index.size() != atoms_) throw Error(ErrorCode::DimensionMismatch, "remap table size != atom count");
  SparseCode out(new_atom_count, samples());
  for (std::size_t m = 0; m < samples(); ++m) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t i = 0; i < support_[m].size(); ++i) {
      const std::size_t k = new_index[support_[m][i]];
      if (k != npos) entries.emplace_back(k, coef_[m][i]);
    }
    std::ranges::sort(entries);
    std::vector<std::size_t> s;
    std::vector<double> c;
    for (auto [k, v] : entries) {
      s.push_back(k);
      c.push_back(v);
    }
    out.set(m, std::move(s), std::move(c));
  }
  return out;
}

void check_unit_columns(const Matrix& dict, double tol) {
  for (std::size_t k = 0; k < dict.cols(); ++k) {
    const double n = norm2(dict.col(k));
    if (std::abs(n - 1.0) > tol)
      throw Error(ErrorCode::NotNormalized, "atom " + std::to_string(k) + " has norm " + std::to_string(n));
  }
}

namespace {

// OMP without input validation; callers check the dictionary once.
OmpResult omp_unchecked(const Matrix& dict, std::span<const double> x, const CodingParams& params) {
  const std::size_t n = dict.rows();
  const std::size_t k_atoms = dict.cols();

  OmpResult out;
  std::vector<double> r(x.begin(), x.end());
  double rsq = dot(r, r);
  out.residual_trace.push_back(std::sqrt(rsq));
  if (rsq <= params.error_tol || rsq == 0.0) {
    out.residual_sq = rsq;
    return out;
  }

  std::vector<std::size_t> order;        // selection order
  std::vector<double> chol;              // lower-triangular, row-major packed by rows of length `cap`
  std::vector<double> rhs;               // D_S^T x
  std::vector<double> coef;
  std::vector<char> in_support(k_atoms, 0);
  const std::size_t cap = std::min(params.max_atoms, k_atoms);
  chol.assign(cap * cap, 0.0);
  std::vector<double> corr(k_atoms);
  std::vector<double> trial_r(n);

  auto L = [&](std::size_t i, std::size_t j) -> double& { return chol[i * cap + j]; };

  while (order.size() < cap) {
    for (std::size_t k = 0; k < k_atoms; ++k) corr[k] = in_support[k] ? 0.0 : dot(dict.col(k), r);
    std::size_t best = k_atoms;
    double best_abs = 0.0;
    for (std::size_t k = 0; k < k_atoms; ++k) {
      if (in_support[k]) continue;
      const double a = std::abs(corr[k]);
      if (best == k_atoms || a > best_abs) {
        best = k;
        best_abs = a;
      }
    }
    if (best == k_atoms || best_abs <= params.numeric_tol) break;

    // Extend the Cholesky factor of the support Gram matrix.
    const std::size_t s = order.size();
    auto atom = dict.col(best);
    std::vector<double> w(s);
    for (std::size_t i = 0; i < s; ++i) {
      double v = dot(dict.col(order[i]), atom);
      for (std::size_t j = 0; j < i; ++j) v -= L(i, j) * w[j];
      w[i] = v / L(i, i);
    }
    const double diag_sq = dot(atom, atom) - dot(w, w);
    if (!(diag_sq > 1e-10)) break;  // atom numerically inside span(support)
    for (std::size_t j = 0; j < s; ++j) L(s, j) = w[j];
    L(s, s) = std::sqrt(diag_sq);
    order.push_back(best);
    in_support[best] = 1;
    rhs.push_back(dot(atom, x));

    // Solve L L^T c = rhs.
    const std::size_t q = order.size();
    std::vector<double> y(q), c(q);
    for (std::size_t i = 0; i < q; ++i) {
      double v = rhs[i];
      for (std::size_t j = 0; j < i; ++j) v -= L(i, j) * y[j];
      y[i] = v / L(i, i);
    }
    for (std::size_t ii = q; ii-- > 0;) {
      double v = y[ii];
      for (std::size_t j = ii + 1; j < q; ++j) v -= L(j, ii) * c[j];
      c[ii] = v / L(ii, ii);
    }

    std::copy(x.begin(), x.end(), trial_r.begin());
    for (std::size_t i = 0; i < q; ++i) {
      auto d = dict.col(order[i]);
      const double ci = c[i];
      for (std::size_t t = 0; t < n; ++t) trial_r[t] -= ci * d[t];
    }
    const double trial_rsq = dot(trial_r, trial_r);
    if (!(trial_rsq < rsq)) {
      order.pop_back();
      in_support[best] = 0;
      rhs.pop_back();
      break;
    }
    r.swap(trial_r);
    rsq = trial_rsq;
    coef = std::move(c);
    out.residual_trace.push_back(std::sqrt(rsq));
    if (rsq <= params.error_tol) break;
  }

  std::vector<std::size_t> perm(order.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::ranges::sort(perm, [&](std::size_t a, std::size_t b) { return order[a] < order[b]; });
  out.support.reserve(perm.size());
  out.coefficients.reserve(perm.size());
  for (std::size_t p : perm) {
    out.support.push_back(order[p]);
    out.coefficients.push_back(coef[p]);
  }
  out.residual_sq = rsq;
  return out;
}

}  // namespace

OmpResult omp_encode(const Matrix& dict, std::span<const double> x, const CodingParams& params) {
  params.validate(dict.cols());
  if (x.size() != dict.rows()) throw Error(ErrorCode::DimensionMismatch, "sample length != atom dimension");
  check_unit_columns(dict);
  return omp_unchecked(dict, x, params);
}

SparseCode batch_encode(const Matrix& dict, const Matrix& x, const CodingParams& params) {
  SparseCode code(dict.cols(), x.cols());
  if (x.cols() == 0) return code;
  params.validate(dict.cols());
  if (x.rows() != dict.rows()) throw Error(ErrorCode::DimensionMismatch, "sample length != atom dimension");
  check_unit_columns(dict);
  parallel_for(x.cols(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t m = begin; m < end; ++m) {
      OmpResult r = omp_unchecked(dict, x.col(m), params);
      code.set(m, std::move(r.support), std::move(r.coefficients));
    }
  });
  return code;
}

Matrix reconstruct(const Matrix& dict, const SparseCode& code) {
  if (dict.cols() != code.atoms()) throw Error(ErrorCode::DimensionMismatch, "dictionary/code atom count differ");
  Matrix out(dict.rows(), code.samples());
  for (std::size_t m = 0; m < code.samples(); ++m) {
    auto col = out.col(m);
    auto s = code.support(m);
    auto c = code.coefficients(m);
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto d = dict.col(s[i]);
      for (std::size_t t = 0; t < d.size(); ++t) col[t] += c[i] * d[t];
    }
  }
  return out;
}

}  // namespace pba
