#include <gtest/gtest.h>

#include <cmath>

#include "pba/error.hpp"
#include "pba/random.hpp"
#include "pba/sparse_coding.hpp"
#include "support/oracles.hpp"

namespace pba {
namespace {

Matrix random_dictionary(std::size_t n, std::size_t k, CounterRng& rng) {
  Matrix d(n, k);
  for (double& v : d.data()) v = rng.next_normal();
  return normalize_columns(d).matrix;
}

std::vector<double> random_vector(std::size_t n, CounterRng& rng) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.next_normal();
  return x;
}

std::vector<double> residual(const Matrix& d, std::span<const double> x, const OmpResult& r) {
  std::vector<double> res(x.begin(), x.end());
  for (std::size_t i = 0; i < r.support.size(); ++i)
    for (std::size_t t = 0; t < res.size(); ++t) res[t] -= r.coefficients[i] * d(t, r.support[i]);
  return res;
}

TEST(CodingParams, Validation) {
  EXPECT_THROW((CodingParams{0, 0.0, 1e-10}.validate(4)), Error);
  EXPECT_THROW((CodingParams{5, 0.0, 1e-10}.validate(4)), Error);
  EXPECT_THROW((CodingParams{2, -1.0, 1e-10}.validate(4)), Error);
  EXPECT_THROW((CodingParams{2, 0.0, 0.0}.validate(4)), Error);
  EXPECT_NO_THROW((CodingParams{4, 0.0, 1e-10}.validate(4)));
}

TEST(Omp, RecoversSingleAtom) {
  CounterRng rng(1);
  const Matrix d = random_dictionary(8, 16, rng);
  std::vector<double> x(d.col(5).begin(), d.col(5).end());
  for (double& v : x) v *= -3.0;
  const auto r = omp_encode(d, x, {4, 1e-20, 1e-10});
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0], 5u);
  EXPECT_NEAR(r.coefficients[0], -3.0, 1e-12);
  EXPECT_LT(r.residual_sq, 1e-20);
}

TEST(Omp, ZeroInputGivesEmptySupport) {
  CounterRng rng(2);
  const Matrix d = random_dictionary(4, 6, rng);
  const auto r = omp_encode(d, std::vector<double>(4, 0.0), {3, 0.0, 1e-10});
  EXPECT_TRUE(r.support.empty());
  EXPECT_EQ(r.residual_sq, 0.0);
  EXPECT_EQ(r.residual_trace.size(), 1u);
}

TEST(Omp, FirstAtomIsBruteForceArgmax) {
  CounterRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix d = random_dictionary(4, 6, rng);
    const auto x = random_vector(4, rng);
    std::size_t best = 0;
    for (std::size_t k = 1; k < 6; ++k)
      if (std::abs(dot(d.col(k), x)) > std::abs(dot(d.col(best), x))) best = k;
    const auto r = omp_encode(d, x, {1, 0.0, 1e-10});
    ASSERT_EQ(r.support.size(), 1u);
    EXPECT_EQ(r.support[0], best);
    std::vector<double> dv(d.data().begin(), d.data().end());
    EXPECT_NEAR(r.residual_sq, oracles::exhaustive_best_residual(dv, 4, 6, x, 1), 1e-12);
  }
}

TEST(Omp, TiesGoToLowestIndex) {
  // Two identical atoms: the lower index must win.
  Matrix d(2, 3, {1, 0, 0, 1, 1, 0});
  const auto r = omp_encode(d, std::vector<double>{2.0, 0.0}, {1, 0.0, 1e-10});
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0], 0u);
}

TEST(Omp, ResidualOrthogonalToSupportAndTraceDecreasing) {
  CounterRng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix d = random_dictionary(16, 40, rng);
    const auto x = random_vector(16, rng);
    const auto r = omp_encode(d, x, {8, 0.0, 1e-10});
    const auto res = residual(d, x, r);
    for (std::size_t k : r.support) EXPECT_LE(std::abs(dot(d.col(k), res)), 1e-8);
    for (std::size_t i = 1; i < r.residual_trace.size(); ++i) EXPECT_LT(r.residual_trace[i], r.residual_trace[i - 1]);
    EXPECT_EQ(r.residual_trace.size(), r.support.size() + 1);
    EXPECT_NEAR(r.residual_sq, dot(res, res), 1e-10);
    for (std::size_t i = 1; i < r.support.size(); ++i) EXPECT_LT(r.support[i - 1], r.support[i]);
  }
}

TEST(Omp, CoefficientsAreLeastSquaresOnSupport) {
  CounterRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix d = random_dictionary(10, 20, rng);
    const auto x = random_vector(10, rng);
    const auto r = omp_encode(d, x, {4, 0.0, 1e-10});
    std::vector<double> dv(d.data().begin(), d.data().end());
    EXPECT_NEAR(r.residual_sq, oracles::support_residual(dv, 10, r.support, x), 1e-10);
  }
}

TEST(Omp, ExactRecoveryOrthogonalAtoms) {
  const Matrix d = Matrix::identity(6);
  const std::vector<double> x{0.0, 2.5, 0.0, -1.0, 0.0, 4.0};
  const auto r = omp_encode(d, x, {6, 0.0, 1e-10});
  EXPECT_EQ(r.support, (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(r.coefficients, (std::vector<double>{2.5, -1.0, 4.0}));
  EXPECT_EQ(r.residual_sq, 0.0);
}

TEST(Omp, ErrorToleranceStopsEarly) {
  const Matrix d = Matrix::identity(4);
  const std::vector<double> x{4.0, 3.0, 0.5, 0.1};
  const auto r = omp_encode(d, x, {4, 0.3, 1e-10});  // 0.25 + 0.01 <= 0.3
  EXPECT_EQ(r.support, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(r.residual_sq, 0.26, 1e-12);
}

TEST(Omp, Deterministic) {
  CounterRng rng(6);
  const Matrix d = random_dictionary(12, 30, rng);
  const auto x = random_vector(12, rng);
  const auto a = omp_encode(d, x, {5, 0.0, 1e-10});
  const auto b = omp_encode(d, x, {5, 0.0, 1e-10});
  EXPECT_EQ(a.support, b.support);
  EXPECT_EQ(a.coefficients, b.coefficients);
  EXPECT_EQ(a.residual_trace, b.residual_trace);
}

TEST(Omp, RejectsUnnormalizedDictionary) {
  Matrix d = Matrix::identity(3);
  d(0, 0) = 2.0;
  try {
    (void)omp_encode(d, std::vector<double>{1, 1, 1}, {1, 0.0, 1e-10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotNormalized);
  }
  EXPECT_THROW(omp_encode(Matrix::identity(3), std::vector<double>{1, 1}, {1, 0.0, 1e-10}), Error);
}

TEST(BatchEncode, MatchesSingleSampleCoding) {
  CounterRng rng(7);
  const Matrix d = random_dictionary(8, 20, rng);
  Matrix x(8, 33);
  for (double& v : x.data()) v = rng.next_normal();
  const CodingParams p{3, 0.1, 1e-10};
  const SparseCode code = batch_encode(d, x, p);
  ASSERT_EQ(code.samples(), 33u);
  for (std::size_t m = 0; m < 33; ++m) {
    const auto r = omp_encode(d, x.col(m), p);
    EXPECT_TRUE(std::ranges::equal(code.support(m), r.support));
    EXPECT_TRUE(std::ranges::equal(code.coefficients(m), r.coefficients));
  }
  const Matrix rec = reconstruct(d, code);
  const Matrix dense = multiply(d, code.to_dense());
  for (std::size_t i = 0; i < rec.data().size(); ++i) EXPECT_NEAR(rec.data()[i], dense.data()[i], 1e-12);
}

TEST(BatchEncode, EmptyBatch) {
  const SparseCode code = batch_encode(Matrix::identity(3), Matrix(3, 0), {1, 0.0, 1e-10});
  EXPECT_EQ(code.samples(), 0u);
  EXPECT_EQ(code.atoms(), 3u);
}

TEST(BatchEncode, DictionaryAsDataGivesIdentityPattern) {
  CounterRng rng(8);
  const Matrix d = random_dictionary(6, 10, rng);
  const SparseCode code = batch_encode(d, d, {3, 1e-20, 1e-10});
  for (std::size_t m = 0; m < 10; ++m) {
    ASSERT_EQ(code.support(m).size(), 1u);
    EXPECT_EQ(code.support(m)[0], m);
    EXPECT_NEAR(code.coefficients(m)[0], 1.0, 1e-12);
  }
}

TEST(SparseCode, SetValidatesSupport) {
  SparseCode c(4, 2);
  EXPECT_THROW(c.set(0, {2, 1}, {1.0, 1.0}), Error);
  EXPECT_THROW(c.set(0, {4}, {1.0}), Error);
  EXPECT_THROW(c.set(0, {1}, {1.0, 2.0}), Error);
  EXPECT_THROW(c.set(2, {1}, {1.0}), Error);
  c.set(1, {0, 3}, {2.0, -1.0});
  const Matrix dense = c.to_dense();
  EXPECT_EQ(dense(0, 1), 2.0);
  EXPECT_EQ(dense(3, 1), -1.0);
}

TEST(SparseCode, EraseAndRemap) {
  SparseCode c(4, 2);
  c.set(0, {0, 2, 3}, {1.0, 2.0, 3.0});
  c.set(1, {1, 2}, {4.0, 5.0});
  c.erase(0, 2);
  EXPECT_TRUE(std::ranges::equal(c.support(0), std::vector<std::size_t>{0, 3}));
  EXPECT_TRUE(std::ranges::equal(c.coefficients(0), std::vector<double>{1.0, 3.0}));
  // Keep atoms 3 -> 0 and 1 -> 1; drop 0 and 2.
  const std::vector<std::size_t> map{SparseCode::npos, 1, SparseCode::npos, 0};
  const SparseCode r = c.remap_atoms(map, 2);
  EXPECT_EQ(r.atoms(), 2u);
  EXPECT_TRUE(std::ranges::equal(r.support(0), std::vector<std::size_t>{0}));
  EXPECT_TRUE(std::ranges::equal(r.coefficients(0), std::vector<double>{3.0}));
  EXPECT_TRUE(std::ranges::equal(r.support(1), std::vector<std::size_t>{1}));
}

}  // namespace
}  // namespace pba
