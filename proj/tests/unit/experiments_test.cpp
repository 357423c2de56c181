#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "mfaccel/error.hpp"
#include "mfaccel/experiments.hpp"

namespace mfaccel {
namespace {

SurrogateModel small_model(Scheme s = Scheme::RK4, std::size_t n = 8) {
  ExperimentConfig c;
  c.scheme = s;
  c.Q = 40;
  c.n = n;
  c.tol = 0.0;
  return build_model(c);
}

TEST(ResolveGrid, RoundsUpToPanelMultiple) {
  ExperimentConfig c;
  const auto p = damped_oscillator();
  c.h = 0.1;
  EXPECT_EQ(resolve_grid(c, p).base_steps(), 40u);
  c.N = 41;
  c.scheme = Scheme::RK4;
  EXPECT_EQ(resolve_grid(c, p).base_steps(), 42u);
  c.scheme = Scheme::RK2;
  EXPECT_EQ(resolve_grid(c, p).base_steps(), 41u);
}

TEST(EquispacedParams, Grid) {
  const ParamDomain d{{5.0}, {25.0}};
  const auto ks = equispaced_params(d, 5);
  ASSERT_EQ(ks.size(), 5u);
  EXPECT_EQ(ks.front()[0], 5.0);
  EXPECT_EQ(ks.back()[0], 25.0);
  EXPECT_EQ(ks[2][0], 15.0);
  EXPECT_EQ(equispaced_params(d, 1).size(), 1u);
}

TEST(CGrid, Points) {
  const auto cs = c_grid(0.9, 1.6, 200);
  ASSERT_EQ(cs.size(), 200u);
  EXPECT_EQ(cs.front(), 0.9);
  EXPECT_NEAR(cs.back(), 1.6, 1e-15);
  EXPECT_THROW((void)c_grid(1.0, 1.0, 3), Error);
  EXPECT_THROW((void)c_grid(1.0, 2.0, 0), Error);
}

TEST(CostReport, Identity) {
  const auto m = small_model();
  const auto c = cost_report(m, 25);
  EXPECT_EQ(c.low_runs, 40u);
  EXPECT_EQ(c.medium_runs, 8u);
  EXPECT_EQ(c.high_runs, 8u);
  EXPECT_DOUBLE_EQ(c.offline_units, 40 + 8 * 2 + 8 * 4);
  EXPECT_DOUBLE_EQ(c.online_units, 25);
  EXPECT_DOUBLE_EQ(c.total_units, c.offline_units + c.online_units);
}

TEST(RelativeL2Error, Basic) {
  const std::vector<double> times{0.0, 1.0};
  auto exact = [](double t) { return State{1.0 + t, 0.0}; };
  auto approx = [](double t) { return State{1.1 * (1.0 + t), 0.0}; };
  EXPECT_NEAR(relative_l2_error(approx, exact, times), 0.1, 1e-14);
}

TEST(Moments, SingleSampleHasZeroSpread) {
  const auto m = small_model();
  const ReferenceSolution ref(m.problem);
  const auto res = moments(m, 1, 3, 4, ref);
  ASSERT_EQ(res.exact.size(), 2u);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      EXPECT_EQ(res.w_star[c].stddev[i], 0.0);
      EXPECT_EQ(res.exact[c].stddev[i], 0.0);
    }
  EXPECT_EQ(res.brute_force_units, 4.0);
}

TEST(Moments, SeededRunsAreBitReproducible) {
  const auto m = small_model();
  const ReferenceSolution ref(m.problem);
  const auto a = moments_table(m, moments(m, 40, 9, 4, ref)).to_csv();
  const auto b = moments_table(m, moments(m, 40, 9, 4, ref)).to_csv();
  EXPECT_EQ(a, b);
  const auto c = moments_table(m, moments(m, 40, 10, 4, ref)).to_csv();
  EXPECT_NE(a, c);
}

TEST(Moments, MeanOfExactEnsemble) {
  const auto m = small_model();
  const ReferenceSolution ref(m.problem);
  const auto res = moments(m, 3, 1, 4, ref);
  const auto ks = sample_parameters(m.problem.domain, 3, 1 ^ 0x9E3779B97F4A7C15ULL);
  const double t = res.times[7];
  double mean = 0.0;
  for (const auto& k : ks) mean += m.problem.eval_exact(t, k)[0] / 3.0;
  EXPECT_NEAR(res.exact[0].mean[7], mean, 1e-13);
}

TEST(ErrorVsN, SinglePointTable) {
  const auto m = small_model();
  const ReferenceSolution ref(m.problem);
  const std::vector<Params> ks{{12.0}};
  const auto rows = surrogate_error_vs_n(m, ks, ref.as_function());
  const auto table = error_vs_n_table(m, rows);
  EXPECT_EQ(table.rows().size(), m.size());
  EXPECT_EQ(table.columns().size(), 4u);
}

TEST(ConvergenceRate, ShortStudyDecays) {
  ExperimentConfig c;
  c.scheme = Scheme::RK2;
  c.h_list = {0.2, 0.1};
  c.Q = 30;
  c.n = 30;
  c.tol = 1e-24;
  c.k_grid = 5;
  c.weight = WeightRule::Nominal;
  const auto r = convergence_rate(c);
  ASSERT_EQ(r.sup_error.size(), 2u);
  EXPECT_LT(r.sup_error[1], r.sup_error[0]);
  EXPECT_GT(r.slope, 2.0);
}

TEST(OrderTable, OneRowPerParameterAndComponent) {
  const auto m = small_model();
  const std::vector<Params> ks{{11.0}, {16.0}};
  const auto rows = estimate_orders(m, ks, 2.5, 4);
  EXPECT_EQ(rows.size(), 4u);
  const auto table = order_table(m, rows);
  EXPECT_EQ(table.rows().size(), 4u);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100,
                            [](std::size_t i) {
                              if (i == 37) throw Error(ErrorCode::NonFiniteState, "boom");
                            }),
               Error);
}

}  // namespace
}  // namespace mfaccel
