#include "mfaccel/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "mfaccel/error.hpp"

namespace mfaccel {

namespace {

std::string join_params(const Params& k) {
  std::string s;
  for (std::size_t i = 0; i < k.size(); ++i) s += (i ? ":" : "") + format_number(k[i]);
  return s;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F&& fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + fmt(xs[i]);
  return s;
}

void add_meta(ResultTable& table, const SurrogateModel& model) {
  table.set_meta("problem", model.problem.name);
  table.set_meta("scheme", std::string(scheme_name(model.scheme)));
  table.set_meta("horizon", format_number(model.base_grid.horizon()));
  table.set_meta("h", format_number(model.base_grid.base_step()));
  table.set_meta("r", std::to_string(model.base_grid.ratio()));
  table.set_meta("N", std::to_string(model.base_grid.base_steps()));
  table.set_meta("Q", std::to_string(model.training_size));
  table.set_meta("n", std::to_string(model.size()));
  table.set_meta("seed", std::to_string(model.seed));
}

std::vector<State> sample(const std::function<State(double)>& f, std::span<const double> times) {
  std::vector<State> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(f(t));
  return out;
}

double relative_l2(const std::vector<State>& a, const std::vector<State>& u) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t m = 0; m < u[i].size(); ++m) {
      const double d = a[i][m] - u[i][m];
      num += d * d;
      den += u[i][m] * u[i][m];
    }
  if (den == 0.0) throw Error(ErrorCode::ArithmeticDegenerate, "reference solution is identically zero");
  return std::sqrt(num / den);
}

// Deterministically decorrelated from the training-set stream of the same seed.
constexpr std::uint64_t kEnsembleStream = 0x9E3779B97F4A7C15ull;

}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& c) {
  std::vector<std::pair<std::string, std::string>> out{
      {"problem", c.problem},
      {"scheme", std::string(scheme_name(c.scheme))},
      {"h", format_number(c.h)},
      {"r", std::to_string(c.r)},
      {"N", c.N ? std::to_string(*c.N) : "auto"},
      {"Q", std::to_string(c.Q)},
      {"n", std::to_string(c.n)},
      {"tol", format_number(c.tol)},
      {"seed", std::to_string(c.seed)},
      {"k", join(c.k, join_params)},
      {"t_eval", c.t_eval ? format_number(*c.t_eval) : "auto"},
      {"spline_degrees", c.spline_degrees.empty() ? "auto" : join(c.spline_degrees, [](int d) { return std::to_string(d); })},
      {"weight", std::string(weight_rule_name(c.weight))},
      {"c_grid", format_number(c.c_min) + ".." + format_number(c.c_max) + " x" + std::to_string(c.c_steps)},
      {"h_list", join(c.h_list, format_number)},
      {"ensemble", std::to_string(c.ensemble)},
      {"k_grid", std::to_string(c.k_grid)},
      {"fine_step", format_number(c.fine_step)},
  };
  return out;
}

LevelGrid resolve_grid(const ExperimentConfig& config, const ParameterizedOde& problem) {
  std::size_t n = config.N ? *config.N : LevelGrid::from_step(problem.horizon, config.h, config.r).base_steps();
  const auto panel = static_cast<std::size_t>(nc_point_count(scheme_order(config.scheme)));
  if (n % panel != 0) n += panel - n % panel;
  return {problem.horizon, n, config.r, 1};
}

SurrogateModel build_model(const ExperimentConfig& config) {
  const ParameterizedOde problem = make_problem(config.problem);
  return build_offline(problem, config.scheme, resolve_grid(config, problem),
                       {config.Q, config.n, config.tol, config.seed});
}

CostReport cost_report(const SurrogateModel& model, std::size_t online_queries) {
  CostReport c{model.training_size, model.size(), model.size(), offline_cost_units(model),
               static_cast<double>(online_queries), 0.0};
  c.total_units = c.offline_units + c.online_units;
  return c;
}

ResultTable build_summary(const SurrogateModel& model) {
  ResultTable table({"order", "k", "residual_norm_sq"});
  add_meta(table, model);
  const CostReport cost = cost_report(model, 0);
  table.set_meta("cost_low_fidelity_runs", std::to_string(cost.low_runs));
  table.set_meta("cost_medium_fidelity_runs", std::to_string(cost.medium_runs));
  table.set_meta("cost_high_fidelity_runs", std::to_string(cost.high_runs));
  table.set_meta("cost_offline_low_fidelity_units", format_number(cost.offline_units));
  for (std::size_t q = 0; q < model.size(); ++q)
    table.add_row({static_cast<std::int64_t>(q + 1), join_params(model.selected[q]), model.selection_residuals[q]});
  return table;
}

std::vector<Params> equispaced_params(const ParamDomain& domain, std::size_t count) {
  domain.validate();
  if (domain.dim() != 1) throw Error(ErrorCode::InvalidArgument, "equispaced grids need a one-dimensional domain");
  if (count == 0) return {};
  if (count == 1) return {Params{0.5 * (domain.lower[0] + domain.upper[0])}};
  std::vector<Params> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back({domain.lower[0] + s * (domain.upper[0] - domain.lower[0])});
  }
  return out;
}

double relative_l2_error(const std::function<State(double)>& approx, const std::function<State(double)>& exact,
                         std::span<const double> times) {
  return relative_l2(sample(approx, times), sample(exact, times));
}

std::vector<OrderRow> estimate_orders(const SurrogateModel& model, std::span<const Params> ks, double t_eval,
                                      int degree) {
  std::vector<OrderRow> rows;
  const int p = scheme_order(model.scheme);
  for (const auto& k : ks) {
    const auto acc = accelerate(predict(model, k), degree, t_eval, p);
    for (std::size_t m = 0; m < acc.state_dim(); ++m) rows.push_back({k, m, acc.orders()[m]});
  }
  return rows;
}

ResultTable order_table(const SurrogateModel& model, std::span<const OrderRow> rows) {
  ResultTable table({"scheme", "k", "component", "p_star", "c_star", "valid"});
  add_meta(table, model);
  for (const auto& row : rows)
    table.add_row({std::string(scheme_name(model.scheme)), join_params(row.k), static_cast<std::int64_t>(row.component),
                   row.estimate.p_star, row.estimate.c_star, static_cast<std::int64_t>(row.estimate.valid)});
  if (!rows.empty()) table.set_meta("t_eval", format_number(rows.front().estimate.reference_time));
  return table;
}

std::vector<double> c_grid(double c_min, double c_max, std::size_t steps) {
  if (steps == 0) throw Error(ErrorCode::InvalidArgument, "c grid needs at least one point");
  if (steps == 1) return {c_min};
  if (!(c_max > c_min)) throw Error(ErrorCode::InvalidArgument, "c grid needs c_max > c_min");
  std::vector<double> out(steps);
  for (std::size_t i = 0; i < steps; ++i)
    out[i] = c_min + (c_max - c_min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  return out;
}

std::vector<CSweepSeries> c_sweep(const SurrogateModel& model, std::span<const double> k, std::span<const int> degrees,
                                  std::span<const double> cs, const ReferenceSolution& reference, double fine_step) {
  if (cs.empty()) throw Error(ErrorCode::InvalidArgument, "empty c grid");
  const auto pred = predict(model, k);
  const auto times = uniform_times(model.base_grid.horizon(), fine_step);
  const auto exact = sample([&](double t) { return reference.at(t, k); }, times);
  const double t_ref = default_reference_time(model.base_grid);
  const int p = scheme_order(model.scheme);

  std::vector<CSweepSeries> out;
  for (int degree : degrees) {
    const auto acc = accelerate(pred, degree, t_ref, p);
    const auto w2 = sample([&](double t) { return acc.eval_level(2, t); }, times);
    const auto w3 = sample([&](double t) { return acc.eval_level(3, t); }, times);
    CSweepSeries s{degree, 0.0, relative_l2(w2, exact), relative_l2(w3, exact), {}, {}, cs.front()};
    for (const auto& o : acc.orders()) s.c_star += o.c_star / static_cast<double>(acc.state_dim());
    std::vector<State> w = w3;
    double best = std::numeric_limits<double>::infinity();
    for (double c : cs) {
      for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t m = 0; m < w[i].size(); ++m) w[i][m] = richardson(w2[i][m], w3[i][m], c);
      const double err = relative_l2(w, exact);
      s.c.push_back(c);
      s.error.push_back(err);
      if (err < best) {
        best = err;
        s.best_c = c;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

ResultTable c_sweep_table(const SurrogateModel& model, std::span<const double> k,
                          std::span<const CSweepSeries> series) {
  ResultTable table({"scheme", "spline_degree", "c", "relative_error", "error_w2", "error_w3", "c_star", "best_c"});
  add_meta(table, model);
  table.set_meta("k", join_params(Params(k.begin(), k.end())));
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.c.size(); ++i)
      table.add_row({std::string(scheme_name(model.scheme)), static_cast<std::int64_t>(s.degree), s.c[i], s.error[i],
                     s.error_w2, s.error_w3, s.c_star, s.best_c});
  return table;
}

RateResult convergence_rate(const ExperimentConfig& config) {
  if (config.h_list.size() < 2) throw Error(ErrorCode::InvalidArgument, "rate study needs at least two timesteps");
  const ParameterizedOde problem = make_problem(config.problem);
  const ReferenceSolution reference(problem, config.fine_step);
  const auto ks = config.k.empty() ? equispaced_params(problem.domain, config.k_grid) : config.k;
  const auto times = uniform_times(problem.horizon, config.fine_step);
  const int p = scheme_order(config.scheme);
  const int degree = config.spline_degrees.empty() ? p : config.spline_degrees.front();

  // Reference samples are shared by every h.
  std::vector<std::vector<State>> exact(ks.size());
  parallel_for(ks.size(), [&](std::size_t i) { exact[i] = sample([&](double t) { return reference.at(t, ks[i]); }, times); });

  RateResult result;
  for (double h : config.h_list) {
    ExperimentConfig c = config;
    c.h = h;
    c.N.reset();
    const SurrogateModel model = build_model(c);
    const double t_ref = config.t_eval.value_or(default_reference_time(model.base_grid));
    std::vector<double> errors(ks.size());
    parallel_for(ks.size(), [&](std::size_t i) {
      const auto acc = accelerate(predict(model, ks[i]), degree, t_ref, p, config.weight);
      errors[i] = relative_l2(sample([&](double t) { return acc.eval(t); }, times), exact[i]);
    });
    result.h.push_back(model.base_grid.base_step());
    result.sup_error.push_back(*std::max_element(errors.begin(), errors.end()));
    result.basis_size.push_back(model.size());
  }
  result.slope = loglog_slope(result.h, result.sup_error);
  return result;
}

ResultTable rate_table(const ExperimentConfig& config, const RateResult& result) {
  ResultTable table({"h", "n", "sup_relative_error"});
  for (const auto& [k, v] : describe(config)) table.set_meta(k, v);
  table.set_meta("slope", format_number(result.slope));
  for (std::size_t i = 0; i < result.h.size(); ++i)
    table.add_row({result.h[i], static_cast<std::int64_t>(result.basis_size[i]), result.sup_error[i]});
  return table;
}

MomentsResult moments(const SurrogateModel& model, std::size_t ensemble, std::uint64_t seed, int degree,
                      const ReferenceSolution& reference, WeightRule rule) {
  if (ensemble == 0) throw Error(ErrorCode::InvalidArgument, "ensemble must be nonempty");
  const auto ks = sample_parameters(model.problem.domain, ensemble, seed ^ kEnsembleStream);
  const LevelGrid g1 = model.grid(1);
  const std::size_t nodes = g1.steps() + 1;
  const std::size_t m_dim = model.problem.state_dim;
  const int p = scheme_order(model.scheme);
  const double t_ref = default_reference_time(g1);
  const auto r = static_cast<std::size_t>(g1.ratio());

  MomentsResult out;
  out.state_dim = m_dim;
  for (std::size_t i = 0; i < nodes; ++i) out.times.push_back(g1.time(i));

  // samples[estimator][s][m * nodes + i]
  constexpr std::size_t kEstimators = 5;  // exact, w*, u1, u2, u3
  std::vector<std::vector<std::vector<double>>> samples(
      kEstimators, std::vector<std::vector<double>>(ensemble, std::vector<double>(m_dim * nodes)));

  parallel_for(ensemble, [&](std::size_t s) {
    const Params& k = ks[s];
    std::array<Trajectory, kLevels> u{integrate(model.problem, model.scheme, g1, k),
                                      integrate(model.problem, model.scheme, model.grid(2), k),
                                      integrate(model.problem, model.scheme, model.grid(3), k)};
    const auto acc = accelerate(predict_from_level1(model, u[0]), degree, t_ref, p, rule);
    for (std::size_t i = 0; i < nodes; ++i) {
      const double t = out.times[i];
      const State ex = reference.at(t, k);
      const State ws = acc.eval(t);
      for (std::size_t m = 0; m < m_dim; ++m) {
        const std::size_t slot = m * nodes + i;
        samples[0][s][slot] = ex[m];
        samples[1][s][slot] = ws[m];
        samples[2][s][slot] = u[0].at(m, i);
        samples[3][s][slot] = u[1].at(m, i * r);
        samples[4][s][slot] = u[2].at(m, i * r * r);
      }
    }
  });

  auto reduce = [&](std::size_t est) {
    std::vector<MomentSeries> series(m_dim, MomentSeries{std::vector<double>(nodes, 0.0), std::vector<double>(nodes, 0.0)});
    const double inv = 1.0 / static_cast<double>(ensemble);
    for (std::size_t m = 0; m < m_dim; ++m)
      for (std::size_t i = 0; i < nodes; ++i) {
        double mean = 0.0;
        for (std::size_t s = 0; s < ensemble; ++s) mean += samples[est][s][m * nodes + i];
        mean *= inv;
        double var = 0.0;
        for (std::size_t s = 0; s < ensemble; ++s) {
          const double d = samples[est][s][m * nodes + i] - mean;
          var += d * d;
        }
        series[m].mean[i] = mean;
        series[m].stddev[i] = std::sqrt(var * inv);
      }
    return series;
  };
  out.exact = reduce(0);
  out.w_star = reduce(1);
  out.u1 = reduce(2);
  out.u2 = reduce(3);
  out.u3 = reduce(4);
  out.surrogate_cost = cost_report(model, ensemble);
  out.brute_force_units = static_cast<double>(ensemble) * static_cast<double>(r * r);
  return out;
}

ResultTable moments_table(const SurrogateModel& model, const MomentsResult& res) {
  ResultTable table({"t", "component", "mean_exact", "std_exact", "mean_err_w_star", "std_err_w_star", "mean_err_u1",
                     "std_err_u1", "mean_err_u2", "std_err_u2", "mean_err_u3", "std_err_u3"});
  add_meta(table, model);
  table.set_meta("cost_surrogate_low_fidelity_units", format_number(res.surrogate_cost.total_units));
  table.set_meta("cost_brute_force_u3_low_fidelity_units", format_number(res.brute_force_units));
  for (std::size_t m = 0; m < res.state_dim; ++m)
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      const double mu = res.exact[m].mean[i];
      const double sd = res.exact[m].stddev[i];
      auto err = [&](const std::vector<MomentSeries>& est) {
        return std::pair{std::abs(est[m].mean[i] - mu), std::abs(est[m].stddev[i] - sd)};
      };
      const auto [mw, sw] = err(res.w_star);
      const auto [m1, s1] = err(res.u1);
      const auto [m2, s2] = err(res.u2);
      const auto [m3, s3] = err(res.u3);
      table.add_row({res.times[i], static_cast<std::int64_t>(m), mu, sd, mw, sw, m1, s1, m2, s2, m3, s3});
    }
  return table;
}

ResultTable error_vs_n_table(const SurrogateModel& model, std::span<const BasisSizeError> rows) {
  ResultTable table({"n", "sup_error_u1_hat", "sup_error_u2_hat", "sup_error_u3_hat"});
  add_meta(table, model);
  for (const auto& row : rows)
    table.add_row({static_cast<std::int64_t>(row.basis_size), row.sup_error[0], row.sup_error[1], row.sup_error[2]});
  return table;
}

ResultTable query_table(const SurrogateModel& model, std::span<const double> k, int degree, double reference_time,
                        std::span<const double> times, WeightRule rule) {
  const std::size_t m_dim = model.problem.state_dim;
  std::vector<std::string> cols{"t"};
  for (const char* prefix : {"w_star_", "w2_", "w3_"})
    for (std::size_t m = 0; m < m_dim; ++m) cols.push_back(prefix + std::to_string(m));
  ResultTable table(std::move(cols));
  add_meta(table, model);
  table.set_meta("k", join_params(Params(k.begin(), k.end())));

  const auto acc = accelerate(predict(model, k), degree, reference_time, scheme_order(model.scheme), rule);
  table.set_meta("weight", std::string(weight_rule_name(rule)));
  for (std::size_t m = 0; m < m_dim; ++m) {
    const auto& o = acc.orders()[m];
    table.set_meta("p_star_" + std::to_string(m), format_number(o.p_star) + (o.valid ? "" : " (fallback)"));
    table.set_meta("c_star_" + std::to_string(m), format_number(o.c_star));
    table.set_meta("c_applied_" + std::to_string(m), format_number(acc.weights()[m]));
  }
  for (double t : times) {
    std::vector<ResultTable::Cell> row{t};
    for (double v : acc.eval(t)) row.emplace_back(v);
    for (double v : acc.eval_level(2, t)) row.emplace_back(v);
    for (double v : acc.eval_level(3, t)) row.emplace_back(v);
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace mfaccel
