#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "mfaccel/accel.hpp"
#include "mfaccel/integrate.hpp"
#include "mfaccel/linalg.hpp"
#include "mfaccel/ode.hpp"
#include "mfaccel/spline.hpp"
#include "mfaccel/surrogate.hpp"

namespace {

using namespace mfaccel;

void BM_IntegrateOscillator(benchmark::State& state) {
  const auto problem = damped_oscillator();
  const auto scheme = static_cast<Scheme>(state.range(0));
  const LevelGrid grid = LevelGrid::from_step(problem.horizon, 0.1, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(integrate(problem, scheme, grid, Params{11.0}));
  state.SetLabel(std::string(scheme_name(scheme)));
}
BENCHMARK(BM_IntegrateOscillator)->DenseRange(0, 5);

void BM_SplineFit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> data(n + 1);
  for (std::size_t i = 0; i <= n; ++i) data[i] = std::sin(4.0 * static_cast<double>(i) / static_cast<double>(n));
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, 4, 4.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SplineFit)->RangeMultiplier(2)->Range(40, 640)->Complexity(benchmark::oN);

// Gram matrix of random vectors, rank min(Q, dim).
template <class T>
linalg::BasicSymMatrix<T> random_gram(std::size_t q, std::size_t dim) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> v(q * dim);
  for (double& x : v) x = g(rng);
  linalg::BasicSymMatrix<T> out(q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      T s = 0;
      for (std::size_t d = 0; d < dim; ++d) s += T(v[i * dim + d]) * T(v[j * dim + d]);
      out.set(i, j, s);
    }
  return out;
}

void BM_PivotedCholeskyDouble(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  const auto g = random_gram<double>(q, 400);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::pivoted_cholesky(g, 20, 0.0));
}
BENCHMARK(BM_PivotedCholeskyDouble)->Arg(100)->Arg(400);

void BM_PivotedCholeskyExtended(benchmark::State& state) {
  const auto q = static_cast<std::size_t>(state.range(0));
  const auto g = random_gram<extended>(q, 400);
  for (auto _ : state) benchmark::DoNotOptimize(linalg::pivoted_cholesky(g, 20, 0.0));
}
BENCHMARK(BM_PivotedCholeskyExtended)->Arg(100)->Arg(400);

const SurrogateModel& oscillator_model() {
  static const SurrogateModel m =
      build_offline(damped_oscillator(), Scheme::RK4, LevelGrid::from_step(4.0, 0.1, 2), {100, 13, 0.0, 0});
  return m;
}

void BM_Predict(benchmark::State& state) {
  const auto& m = oscillator_model();
  for (auto _ : state) benchmark::DoNotOptimize(predict(m, Params{11.3}));
}
BENCHMARK(BM_Predict);

void BM_PredictAndAccelerate(benchmark::State& state) {
  const auto& m = oscillator_model();
  for (auto _ : state) benchmark::DoNotOptimize(accelerate(predict(m, Params{11.3}), 4, 2.5, 4));
}
BENCHMARK(BM_PredictAndAccelerate);

void BM_BuildOffline(benchmark::State& state) {
  const auto problem = damped_oscillator();
  const LevelGrid grid = LevelGrid::from_step(4.0, 0.1, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(build_offline(problem, Scheme::RK4, grid, {static_cast<std::size_t>(state.range(0)), 13, 0.0, 0}));
}
BENCHMARK(BM_BuildOffline)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
