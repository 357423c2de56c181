#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mfaccel/error.hpp"
#include "mfaccel/quadrature.hpp"
#include "test_support.hpp"

namespace mfaccel {
namespace {

using testing::make_trajectory;

TEST(NcPointCount, Formula) {
  EXPECT_EQ(nc_point_count(1), 1);
  EXPECT_EQ(nc_point_count(2), 1);
  EXPECT_EQ(nc_point_count(3), 2);
  EXPECT_EQ(nc_point_count(4), 2);
  EXPECT_EQ(nc_point_count(5), 4);
  EXPECT_EQ(nc_point_count(6), 4);
  for (int bad : {0, 7}) {
    try {
      (void)nc_point_count(bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedOrder);
    }
  }
}

TEST(NewtonCotes, ClassicalRules) {
  const auto t = newton_cotes_unit_weights(1);
  EXPECT_NEAR(t[0], 0.5, 1e-15);
  EXPECT_NEAR(t[1], 0.5, 1e-15);
  const auto s = newton_cotes_unit_weights(2);
  const double simpson[] = {1.0 / 6, 4.0 / 6, 1.0 / 6};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s[i], simpson[i], 1e-15);
  const auto b = newton_cotes_unit_weights(4);
  const double boole[] = {7.0 / 90, 32.0 / 90, 12.0 / 90, 32.0 / 90, 7.0 / 90};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(b[i], boole[i], 1e-15);
}

TEST(NewtonCotes, PolynomialExactness) {
  // Exact for monomials up to P, and P+1 when P is even.
  for (int P = 1; P <= 6; ++P) {
    const auto w = newton_cotes_unit_weights(P);
    const int top = P % 2 == 0 ? P + 1 : P;
    for (int d = 0; d <= top; ++d) {
      double s = 0.0;
      for (int i = 0; i <= P; ++i) s += w[static_cast<std::size_t>(i)] * std::pow(static_cast<double>(i) / P, d);
      EXPECT_NEAR(s, 1.0 / (d + 1), 1e-13) << "P=" << P << " d=" << d;
    }
  }
}

TEST(CompositeWeights, Examples) {
  const auto trap = composite_weights(LevelGrid(1.0, 2, 2), 2);
  EXPECT_EQ(trap.panel_points, 1);
  const double t[] = {0.25, 0.5, 0.25};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(trap.w[static_cast<std::size_t>(i)], t[i], 1e-15);

  const auto simp = composite_weights(LevelGrid(1.0, 4, 2), 4);
  EXPECT_EQ(simp.panel_points, 2);
  const double s[] = {1.0 / 12, 4.0 / 12, 2.0 / 12, 4.0 / 12, 1.0 / 12};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(simp.w[static_cast<std::size_t>(i)], s[i], 1e-15);
}

TEST(CompositeWeights, PositiveAndNormalized) {
  for (int p = 1; p <= 6; ++p)
    for (int level = 1; level <= 3; ++level) {
      const auto q = composite_weights(LevelGrid(4.0, 40, 2, level), p);
      EXPECT_EQ(q.w.size(), q.grid.steps() + 1);
      EXPECT_NEAR(std::accumulate(q.w.begin(), q.w.end(), 0.0), 1.0, 1e-12);
      for (double w : q.w) EXPECT_GT(w, 0.0);
    }
}

TEST(CompositeWeights, IndivisibleGrid) {
  try {
    (void)composite_weights(LevelGrid(1.0, 5, 2), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IndivisibleGrid);
  }
}

TEST(InnerProduct, ConstantsAndNormalization) {
  const LevelGrid g(1.0, 8, 2);
  const auto w = composite_weights(g, 2);
  const auto one = make_trajectory(g, 1, [](auto, auto) { return 1.0; });
  EXPECT_NEAR(inner_product(one, one, w), 1.0, 1e-15);
  const auto two = make_trajectory(g, 2, [](auto, auto) { return 1.0; });
  EXPECT_NEAR(inner_product(two, two, w), 1.0, 1e-15);
}

TEST(InnerProduct, SimpsonIntegratesSquare) {
  const LevelGrid g(1.0, 10, 2);
  const auto w = composite_weights(g, 4);
  const auto a = make_trajectory(g, 1, [&](auto, std::size_t i) { return g.time(i); });
  EXPECT_NEAR(inner_product(a, a, w), 1.0 / 3.0, 1e-14);
}

TEST(InnerProduct, SymmetricAndBilinear) {
  const LevelGrid g(2.0, 12, 2);
  const auto w = composite_weights(g, 3);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  auto rand = [&] { return make_trajectory(g, 2, [&](auto, auto) { return n(rng); }); };
  const auto a = rand(), b = rand(), c = rand();
  auto sum = make_trajectory(g, 2, [&](std::size_t m, std::size_t i) { return a.at(m, i) + c.at(m, i); });
  EXPECT_NEAR(inner_product(a, b, w), inner_product(b, a, w), 1e-15);
  const double lhs = inner_product(sum, b, w);
  const double rhs = inner_product(a, b, w) + inner_product(c, b, w);
  EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + 1.0));
}

TEST(InnerProduct, GridMismatch) {
  const LevelGrid g(1.0, 4, 2);
  const auto w = composite_weights(g, 2);
  const auto a = make_trajectory(g, 1, [](auto, auto) { return 1.0; });
  const auto b = make_trajectory(g.at_level(2), 1, [](auto, auto) { return 1.0; });
  try {
    (void)inner_product(a, b, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(GramAndRhs, OrthonormalSnapshots) {
  const LevelGrid g(1.0, 2, 2);
  const auto w = composite_weights(g, 2);
  std::vector<Trajectory> snaps;
  for (std::size_t q = 0; q < 3; ++q)
    snaps.push_back(make_trajectory(g, 1, [&](auto, std::size_t i) { return i == q ? 1.0 / std::sqrt(w.w[i]) : 0.0; }));
  const auto [gram, f] = gram_and_rhs(std::span<const Trajectory>(snaps), snaps[1], w);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(gram(i, j), i == j ? 1.0 : 0.0, 1e-15);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(f[i], gram(i, 1));
}

TEST(GramAndRhs, MatchesDirectSummation) {
  const LevelGrid g(1.0, 6, 2);
  const auto w = composite_weights(g, 4);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  std::vector<Trajectory> snaps;
  for (int q = 0; q < 3; ++q) snaps.push_back(make_trajectory(g, 2, [&](auto, auto) { return n(rng); }));
  const auto query = make_trajectory(g, 2, [&](auto, auto) { return n(rng); });
  const auto [gram, f] = gram_and_rhs(std::span<const Trajectory>(snaps), query, w);
  auto direct = [&](const Trajectory& a, const Trajectory& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.nodes(); ++i) s += w.w[i] * (a.at(0, i) * b.at(0, i) + a.at(1, i) * b.at(1, i));
    return s / 2.0;
  };
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(f[i], direct(query, snaps[i]), 1e-14);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(gram(i, j), direct(snaps[i], snaps[j]), 1e-14);
  }
  EXPECT_NO_THROW((void)linalg::pivoted_cholesky(gram, 3, 0.0));
  const auto ext = gram_matrix<extended>(std::span<const Trajectory>(snaps), w);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(static_cast<double>(ext(i, j)), gram(i, j), 1e-14);
}

}  // namespace
}  // namespace mfaccel
