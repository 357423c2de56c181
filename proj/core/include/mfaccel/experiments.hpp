#pragma once

// Experiment drivers behind the command-line tool. Each returns structured
// results plus a ResultTable rendering of them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mfaccel/accel.hpp"
#include "mfaccel/reference.hpp"
#include "mfaccel/result_table.hpp"
#include "mfaccel/surrogate.hpp"

namespace mfaccel {

struct ExperimentConfig {
  std::string problem = "oscillator";
  Scheme scheme = Scheme::RK4;
  double h = 0.1;
  int r = 2;
  std::optional<std::size_t> N;  ///< overrides h when set
  std::size_t Q = 100;
  std::size_t n = 13;
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::vector<Params> k;
  std::optional<double> t_eval;
  std::vector<int> spline_degrees;  ///< empty: the scheme order
  WeightRule weight = WeightRule::Estimated;
  double c_min = 0.9;
  double c_max = 1.6;
  std::size_t c_steps = 200;
  std::vector<double> h_list{0.2, 0.1, 0.05, 0.025};
  std::size_t ensemble = 1000;
  std::size_t k_grid = 100;  ///< equally spaced points for sup-over-k studies
  double fine_step = 1e-3;
  std::string model_path;
  std::string out_path;
};

/// Key/value echo for table headers.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

/// Level-1 grid for the config. N defaults to T/h and is rounded up to the
/// next multiple of the Newton-Cotes panel size P(p) when needed.
LevelGrid resolve_grid(const ExperimentConfig& config, const ParameterizedOde& problem);

SurrogateModel build_model(const ExperimentConfig& config);

/// Selected parameters, greedy residuals and the cost report for a model.
ResultTable build_summary(const SurrogateModel& model);

struct CostReport {
  std::size_t low_runs;     ///< Q
  std::size_t medium_runs;  ///< n
  std::size_t high_runs;    ///< n
  double offline_units;     ///< Q + n r + n r^2
  double online_units;      ///< one level-1 run per query
  double total_units;
};
CostReport cost_report(const SurrogateModel& model, std::size_t online_queries);

/// k_grid equally spaced points over a one-dimensional parameter domain.
std::vector<Params> equispaced_params(const ParamDomain& domain, std::size_t count);

/// sqrt(sum |a - u|^2) / sqrt(sum |u|^2) over every component and time.
double relative_l2_error(const std::function<State(double)>& approx, const std::function<State(double)>& exact,
                         std::span<const double> times);

struct OrderRow {
  Params k;
  std::size_t component;
  OrderEstimate estimate;
};
std::vector<OrderRow> estimate_orders(const SurrogateModel& model, std::span<const Params> ks, double t_eval,
                                      int degree);
ResultTable order_table(const SurrogateModel& model, std::span<const OrderRow> rows);

struct CSweepSeries {
  int degree;
  double c_star;          ///< per-component mean of the estimated weights
  double error_w2;        ///< relative error of the level-2 spline
  double error_w3;        ///< relative error of the level-3 spline
  std::vector<double> c;
  std::vector<double> error;
  double best_c;          ///< argmin of error over c
};
std::vector<double> c_grid(double c_min, double c_max, std::size_t steps);
std::vector<CSweepSeries> c_sweep(const SurrogateModel& model, std::span<const double> k, std::span<const int> degrees,
                                  std::span<const double> cs, const ReferenceSolution& reference, double fine_step);
ResultTable c_sweep_table(const SurrogateModel& model, std::span<const double> k,
                          std::span<const CSweepSeries> series);

struct RateResult {
  std::vector<double> h;
  std::vector<double> sup_error;  ///< sup over k of the relative fine-grid error of w*
  std::vector<std::size_t> basis_size;
  double slope;
};
RateResult convergence_rate(const ExperimentConfig& config);
ResultTable rate_table(const ExperimentConfig& config, const RateResult& result);

struct MomentSeries {
  std::vector<double> mean;
  std::vector<double> stddev;
};
struct MomentsResult {
  std::vector<double> times;  ///< level-1 nodes
  std::size_t state_dim;
  /// [component] for the exact ensemble and each estimator.
  std::vector<MomentSeries> exact, w_star, u1, u2, u3;
  CostReport surrogate_cost;
  double brute_force_units;  ///< ensemble r^2
};
MomentsResult moments(const SurrogateModel& model, std::size_t ensemble, std::uint64_t seed, int degree,
                      const ReferenceSolution& reference, WeightRule rule = WeightRule::Estimated);
ResultTable moments_table(const SurrogateModel& model, const MomentsResult& result);

ResultTable error_vs_n_table(const SurrogateModel& model, std::span<const BasisSizeError> rows);

/// w* and the level splines for one parameter value at the given times.
ResultTable query_table(const SurrogateModel& model, std::span<const double> k, int degree, double reference_time,
                        std::span<const double> times, WeightRule rule = WeightRule::Estimated);

/// Runs fn(i) for i in [0, count) on a pool of threads. Callers write results
/// by index so output order never depends on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace mfaccel
