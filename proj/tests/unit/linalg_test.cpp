#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mfaccel/error.hpp"
#include "mfaccel/linalg.hpp"
#include "test_support.hpp"

namespace mfaccel::linalg {
namespace {

double frobenius(const SymMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

void expect_code(ErrorCode code, const auto& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(PivotedCholesky, IdentityPicksInIndexOrder) {
  const SymMatrix g{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto res = pivoted_cholesky(g, 3, 0.0);
  EXPECT_EQ(res.pivots, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(res.residual_diag, (std::vector<double>{1, 1, 1}));
}

TEST(PivotedCholesky, DiagonalPicksLargestFirst) {
  const SymMatrix g{{4, 0, 0}, {0, 1, 0}, {0, 0, 9}};
  const auto res = pivoted_cholesky(g, 3, 0.0);
  EXPECT_EQ(res.pivots, (std::vector<std::size_t>{2, 0, 1}));
  EXPECT_EQ(res.residual_diag, (std::vector<double>{9, 4, 1}));
}

TEST(PivotedCholesky, RankOneStopsAfterOnePivot) {
  const SymMatrix g{{1, 2}, {2, 4}};
  const auto res = pivoted_cholesky(g, 2, 1e-12);
  ASSERT_EQ(res.pivots.size(), 1u);
  EXPECT_EQ(res.pivots[0], 1u);
  EXPECT_DOUBLE_EQ(res.residual_diag[0], 4.0);
  EXPECT_EQ(res.max_remaining, 0.0);
}

TEST(PivotedCholesky, ReconstructsRandomSpd) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 8);
    const auto g = testing::random_spd(n, rng, 0.1);
    const auto res = pivoted_cholesky(g, n, 0.0);
    ASSERT_EQ(res.pivots.size(), n);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += res.factor(i, r) * res.factor(j, r);
        err += (s - g(i, j)) * (s - g(i, j));
      }
    EXPECT_LE(std::sqrt(err), 1e-9 * frobenius(g));
    for (std::size_t q = 1; q < n; ++q) EXPECT_LE(res.residual_diag[q], res.residual_diag[q - 1]);
  }
}

TEST(PivotedCholesky, ExtendedMatchesDouble) {
  std::mt19937_64 rng(3);
  const auto g = testing::random_spd(6, rng, 1.0);
  const auto a = pivoted_cholesky(g, 6, 0.0);
  const auto b = pivoted_cholesky(g.cast<extended>(), 6, 0.0);
  EXPECT_EQ(a.pivots, b.pivots);
  for (std::size_t q = 0; q < 6; ++q)
    EXPECT_NEAR(a.residual_diag[q], static_cast<double>(b.residual_diag[q]), 1e-12 * a.residual_diag[0]);
}

TEST(PivotedCholesky, RejectsNonSymmetric) {
  const SymMatrix g{{1, 2}, {0, 4}};
  expect_code(ErrorCode::NonSymmetric, [&] { (void)pivoted_cholesky(g, 2, 0.0); });
}

TEST(PivotedCholesky, RejectsIndefinite) {
  const SymMatrix g{{1, 2}, {2, 1}};
  expect_code(ErrorCode::NegativeDiagonal, [&] { (void)pivoted_cholesky(g, 2, 0.0); });
}

TEST(SolveSpd, Examples) {
  const std::vector<double> f1{3, 5};
  EXPECT_EQ(solve_spd(SymMatrix{{1, 0}, {0, 1}}, std::span<const double>(f1)), f1);
  const std::vector<double> f2{2, 4};
  const auto v2 = solve_spd(SymMatrix{{2, 0}, {0, 2}}, std::span<const double>(f2));
  EXPECT_NEAR(v2[0], 1.0, 1e-15);
  EXPECT_NEAR(v2[1], 2.0, 1e-15);
  const std::vector<double> f3{3, 3};
  const auto v = solve_spd(SymMatrix{{2, 1}, {1, 2}}, std::span<const double>(f3));
  EXPECT_NEAR(v[0], 1.0, 1e-15);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(SolveSpd, SingularIsRejected) {
  const std::vector<double> f{1, 1};
  expect_code(ErrorCode::SingularSystem, [&] { (void)solve_spd(SymMatrix{{1, 1}, {1, 1}}, std::span<const double>(f)); });
}

TEST(SolveSpd, InvertsApplyOnConditionedMatrices) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 8;
    // Q diag(s) Q^T with singular values spread over [1e-6, 1].
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) q[j][i] = normal(rng);
      for (std::size_t l = 0; l < j; ++l) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += q[j][i] * q[l][i];
        for (std::size_t i = 0; i < n; ++i) q[j][i] -= d * q[l][i];
      }
      double nn = 0.0;
      for (double v : q[j]) nn += v * v;
      for (double& v : q[j]) v /= std::sqrt(nn);
    }
    SymMatrix g(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b <= a; ++b) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += std::pow(10.0, -6.0 * static_cast<double>(j) / (n - 1)) * q[j][a] * q[j][b];
        g.set(a, b, s);
      }
    std::vector<double> x(n);
    for (double& v : x) v = normal(rng);
    const auto f = g.apply(x);
    const auto y = solve_spd(g, std::span<const double>(f), 1e-14);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err += (y[i] - x[i]) * (y[i] - x[i]);
    EXPECT_LE(std::sqrt(err), 1e-9 * norm2(x)) << "trial " << trial;
  }
}

TEST(SolveBanded, TridiagonalIdentity) {
  BandedMatrix a(4, 1);
  for (std::size_t i = 0; i < 4; ++i) a.set(i, i, 1.0);
  const std::vector<double> f{1, -2, 3, 4};
  EXPECT_EQ(solve_banded(a, f), f);
}

TEST(SolveBanded, SecondDifference) {
  BandedMatrix a(3, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    a.set(i, i, 2.0);
    if (i > 0) a.set(i, i - 1, -1.0);
    if (i + 1 < 3) a.set(i, i + 1, -1.0);
  }
  const std::vector<double> f{1, 0, 1};
  const auto x = solve_banded(a, f);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(SolveBanded, BandwidthViolationAtConstruction) {
  const Matrix dense{{1, 0, 5}, {0, 1, 0}, {0, 0, 1}};
  expect_code(ErrorCode::BandwidthViolation, [&] { BandedMatrix(dense, 1); });
  BandedMatrix a(3, 1);
  expect_code(ErrorCode::BandwidthViolation, [&] { a.set(0, 2, 1.0); });
}

TEST(SolveBanded, NeedsPivoting) {
  // Zero leading entry forces a row swap within the band.
  const Matrix dense{{0, 1, 0}, {1, 0, 1}, {0, 1, 1}};
  const BandedMatrix a(dense, 1);
  const std::vector<double> f{1, 2, 3};
  const auto x = solve_banded(a, f);
  const auto back = a.apply(x);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(back[i], f[i], 1e-14);
}

TEST(SolveBanded, SingularIsRejected) {
  BandedMatrix a(2, 1);
  a.set(0, 0, 1.0);
  a.set(0, 1, 1.0);
  a.set(1, 0, 1.0);
  a.set(1, 1, 1.0);
  const std::vector<double> f{1, 1};
  expect_code(ErrorCode::SingularSystem, [&] { (void)solve_banded(a, f); });
}

TEST(SolveBanded, RandomBandedResidual) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = 50, b = 3;
  BandedMatrix a(n, b);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = (i >= b ? i - b : 0); j <= std::min(n - 1, i + b); ++j) a.set(i, j, u(rng) + (i == j ? 4.0 : 0.0));
  std::vector<double> f(n);
  for (double& v : f) v = u(rng);
  const auto x = solve_banded(a, f);
  const auto back = a.apply(x);
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) r += (back[i] - f[i]) * (back[i] - f[i]);
  EXPECT_LE(std::sqrt(r), 1e-10 * norm2(f));
}

}  // namespace
}  // namespace mfaccel::linalg
