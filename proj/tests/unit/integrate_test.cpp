#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "mfaccel/error.hpp"
#include "mfaccel/integrate.hpp"
#include "test_support.hpp"

namespace mfaccel {
namespace {

TEST(Scheme, Metadata) {
  EXPECT_EQ(scheme_order(Scheme::RK2), 2);
  EXPECT_EQ(scheme_order(Scheme::AB3), 3);
  EXPECT_EQ(scheme_order(Scheme::AB4), 4);
  EXPECT_TRUE(is_multistep(Scheme::AB2));
  EXPECT_FALSE(is_multistep(Scheme::RK4));
  EXPECT_EQ(parse_scheme("rk3"), Scheme::RK3);
  EXPECT_EQ(parse_scheme("Ab4"), Scheme::AB4);
  EXPECT_EQ(scheme_name(Scheme::AB2), "AB2");
  try {
    (void)parse_scheme("rk5");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownScheme);
  }
}

TEST(LevelGrid, Hierarchy) {
  const auto g = LevelGrid::from_step(4.0, 0.1, 2);
  EXPECT_EQ(g.steps(), 40u);
  const auto g3 = g.at_level(3);
  EXPECT_EQ(g3.steps(), 160u);
  EXPECT_NEAR(g3.step(), 0.025, 1e-15);
  EXPECT_NEAR(static_cast<double>(g3.steps()) * g3.step(), 4.0, 1e-12);
  const LevelGrid r3(4.0, 40, 3, 2);
  EXPECT_EQ(r3.steps(), 120u);
  EXPECT_THROW(LevelGrid::from_step(4.0, 0.3, 2), Error);
}

TEST(Integrate, ZeroRhsIsExactForEveryScheme) {
  const auto p = testing::scalar_problem([](double) { return 0.0; }, 0.7, 1.0);
  for (Scheme s : kAllSchemes) {
    const auto traj = integrate(p, s, LevelGrid(1.0, 10, 2), Params{0.0});
    for (double v : traj.component(0)) EXPECT_EQ(v, 0.7) << scheme_name(s);
  }
}

TEST(Integrate, OneStepTaylorPolynomials) {
  const auto p = testing::scalar_problem([](double u) { return u; }, 1.0, 0.1);
  const double h = 0.1;
  const double t2 = 1 + h + h * h / 2;
  const double t3 = t2 + h * h * h / 6;
  const double t4 = t3 + h * h * h * h / 24;
  const LevelGrid g(0.1, 1, 2);
  EXPECT_NEAR(integrate(p, Scheme::RK2, g, Params{0.0}).at(0, 1), t2, 1e-15);
  EXPECT_NEAR(integrate(p, Scheme::RK3, g, Params{0.0}).at(0, 1), t3, 1e-15);
  EXPECT_NEAR(integrate(p, Scheme::RK4, g, Params{0.0}).at(0, 1), t4, 1e-15);
  EXPECT_NEAR(t4, 1.1051708333333333, 1e-15);
}

TEST(Integrate, AdamsBashforthRecurrence) {
  // u' = u: after the RK bootstrap each step is a fixed linear recurrence.
  const auto p = testing::scalar_problem([](double u) { return u; }, 1.0, 0.4);
  const double h = 0.1;
  const auto rk2 = integrate(p, Scheme::RK2, LevelGrid(0.4, 4, 2), Params{0.0});
  const auto ab2 = integrate(p, Scheme::AB2, LevelGrid(0.4, 4, 2), Params{0.0});
  std::vector<double> u{1.0, rk2.at(0, 1)};
  for (int i = 1; i < 4; ++i) u.push_back(u[i] + h * (1.5 * u[i] - 0.5 * u[i - 1]));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(ab2.at(0, i), u[i], 1e-15);

  const auto rk4 = integrate(p, Scheme::RK4, LevelGrid(0.4, 4, 2), Params{0.0});
  const auto ab4 = integrate(p, Scheme::AB4, LevelGrid(0.4, 4, 2), Params{0.0});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ab4.at(0, i), rk4.at(0, i), 1e-15);
  const double next = ab4.at(0, 3) + h / 24.0 * (55 * ab4.at(0, 3) - 59 * ab4.at(0, 2) + 37 * ab4.at(0, 1) - 9 * ab4.at(0, 0));
  EXPECT_NEAR(ab4.at(0, 4), next, 1e-15);
}

TEST(Integrate, InitialValueStored) {
  const auto p = damped_oscillator();
  for (Scheme s : kAllSchemes) {
    const auto t = integrate(p, s, LevelGrid::from_step(4.0, 0.1, 2), Params{11.0});
    EXPECT_EQ(t.node(0), (State{1.0, 10.0}));
    EXPECT_EQ(t.nodes(), 41u);
  }
}

TEST(Integrate, Rk4ErrorScalesLikeH4) {
  const auto p = damped_oscillator();
  const Params k{11.0};
  const auto exact = p.eval_exact(2.5, k)[0];
  const auto e1 = std::abs(integrate(p, Scheme::RK4, LevelGrid::from_step(4.0, 0.1, 2), k).at(0, 25) - exact);
  const auto e2 = std::abs(integrate(p, Scheme::RK4, LevelGrid::from_step(4.0, 0.05, 2), k).at(0, 50) - exact);
  const double c = e2 / std::pow(0.05, 4);
  EXPECT_LE(e1, 2.0 * c * std::pow(0.1, 4));
}

TEST(Integrate, GridTooShortForMultistep) {
  const auto p = testing::scalar_problem([](double u) { return u; }, 1.0, 1.0);
  EXPECT_NO_THROW((void)integrate(p, Scheme::RK4, LevelGrid(1.0, 3, 2), Params{0.0}));
  try {
    (void)integrate(p, Scheme::AB4, LevelGrid(1.0, 3, 2), Params{0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadGrid);
  }
}

TEST(Integrate, BlowUpIsReported) {
  const auto p = testing::scalar_problem([](double u) { return u * u; }, 1.0, 4.0);
  try {
    (void)integrate(p, Scheme::RK4, LevelGrid(4.0, 40, 2), Params{0.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonFiniteState);
  }
}

TEST(ConvergenceSlope, NominalOrders) {
  const auto p = damped_oscillator();
  const std::vector<double> hs{0.1, 0.05, 0.025, 0.0125};
  for (Scheme s : kAllSchemes) {
    const double slope = convergence_slope(p, s, Params{11.0}, hs, 2.5);
    EXPECT_NEAR(slope, scheme_order(s), 0.2) << scheme_name(s);
  }
}

TEST(ConvergenceSlope, ZeroErrorIsDegenerate) {
  auto p = testing::scalar_problem([](double) { return 0.0; }, 2.0, 1.0);
  p.exact = [](double, std::span<const double>, std::span<double> u) { u[0] = 2.0; };
  const std::vector<double> hs{0.1, 0.05};
  try {
    (void)convergence_slope(p, Scheme::RK4, Params{0.0}, hs, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArithmeticDegenerate);
  }
}

TEST(LoglogSlope, MatchesIndependentFit) {
  const std::vector<double> x{0.1, 0.05, 0.025};
  const std::vector<double> y{3e-4, 2e-5, 1.7e-6};
  EXPECT_NEAR(loglog_slope(x, y), testing::fit_slope(x, y), 1e-12);
  const std::vector<double> bad{1.0, 0.0, 1.0};
  EXPECT_THROW((void)loglog_slope(x, bad), Error);
}

TEST(Integrate, RefinementConsistency) {
  // Level j+1 restricted to every r-th node approaches level j at order p.
  const auto p = damped_oscillator();
  const Params k{16.0};
  for (Scheme s : {Scheme::RK2, Scheme::RK4, Scheme::AB3}) {
    std::vector<double> hs, diffs;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
      const auto g = LevelGrid::from_step(4.0, h, 2);
      const auto a = integrate(p, s, g, k);
      const auto b = integrate(p, s, g.at_level(2), k);
      double d = 0.0;
      for (std::size_t m = 0; m < 2; ++m)
        for (std::size_t i = 0; i < a.nodes(); ++i) d = std::max(d, std::abs(a.at(m, i) - b.at(m, 2 * i)));
      hs.push_back(h);
      diffs.push_back(d);
    }
    EXPECT_NEAR(testing::fit_slope(hs, diffs), scheme_order(s), 0.3) << scheme_name(s);
  }
}

}  // namespace
}  // namespace mfaccel
