#include "mfaccel/integrate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "mfaccel/error.hpp"

namespace mfaccel {

namespace {

struct Tableau {
  int stages;
  std::array<std::array<double, 4>, 4> a;
  std::array<double, 4> b;
  std::array<double, 4> c;
};

// RK2: explicit midpoint. RK3: Kutta's third-order method. RK4: classical.
constexpr Tableau kRk2{2, {{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {}, {}}}, {0.0, 1.0, 0, 0}, {0.0, 0.5, 0, 0}};
constexpr Tableau kRk3{3,
                       {{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {-1.0, 2.0, 0, 0}, {}}},
                       {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 0},
                       {0.0, 0.5, 1.0, 0}};
constexpr Tableau kRk4{4,
                       {{{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0}, {0, 0, 1.0, 0}}},
                       {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
                       {0.0, 0.5, 0.5, 1.0}};

const Tableau& tableau_for_order(int p) {
  switch (p) {
    case 2: return kRk2;
    case 3: return kRk3;
    default: return kRk4;
  }
}

// Adams-Bashforth weights, newest history value first.
std::span<const double> ab_weights(int p) {
  static constexpr std::array<double, 2> ab2{3.0 / 2.0, -1.0 / 2.0};
  static constexpr std::array<double, 3> ab3{23.0 / 12.0, -16.0 / 12.0, 5.0 / 12.0};
  static constexpr std::array<double, 4> ab4{55.0 / 24.0, -59.0 / 24.0, 37.0 / 24.0, -9.0 / 24.0};
  switch (p) {
    case 2: return ab2;
    case 3: return ab3;
    default: return ab4;
  }
}

class RkStepper {
 public:
  RkStepper(const ParameterizedOde& problem, const Tableau& tab, std::span<const double> k)
      : problem_(problem), tab_(tab), k_(k), stage_(tab.stages, State(problem.state_dim)),
        tmp_(problem.state_dim) {}

  // Advances u in place from t to t + h.
  void step(double t, double h, std::span<double> u) {
    const std::size_t m = u.size();
    for (int s = 0; s < tab_.stages; ++s) {
      for (std::size_t i = 0; i < m; ++i) {
        double acc = u[i];
        for (int q = 0; q < s; ++q) acc += h * tab_.a[s][q] * stage_[q][i];
        tmp_[i] = acc;
      }
      problem_.rhs(t + tab_.c[s] * h, tmp_, k_, stage_[s]);
    }
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int s = 0; s < tab_.stages; ++s) acc += tab_.b[s] * stage_[s][i];
      u[i] += h * acc;
    }
  }

 private:
  const ParameterizedOde& problem_;
  const Tableau& tab_;
  std::span<const double> k_;
  std::vector<State> stage_;
  State tmp_;
};

void check_finite(std::span<const double> u, std::size_t step) {
  for (double v : u)
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFiniteState,
                  "state became non-finite at step " + std::to_string(step) + " (timestep too large?)");
}

}  // namespace

int scheme_order(Scheme s) noexcept {
  switch (s) {
    case Scheme::RK2:
    case Scheme::AB2: return 2;
    case Scheme::RK3:
    case Scheme::AB3: return 3;
    case Scheme::RK4:
    case Scheme::AB4: return 4;
  }
  return 0;
}

bool is_multistep(Scheme s) noexcept { return s == Scheme::AB2 || s == Scheme::AB3 || s == Scheme::AB4; }

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::RK2: return "RK2";
    case Scheme::RK3: return "RK3";
    case Scheme::RK4: return "RK4";
    case Scheme::AB2: return "AB2";
    case Scheme::AB3: return "AB3";
    case Scheme::AB4: return "AB4";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Scheme s : kAllSchemes)
    if (scheme_name(s) == upper) return s;
  throw Error(ErrorCode::UnknownScheme, "no scheme named '" + std::string(name) + "'");
}

LevelGrid::LevelGrid(double horizon, std::size_t base_steps, int r, int level)
    : horizon_(horizon), base_steps_(base_steps), r_(r), level_(level), steps_(base_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Error(ErrorCode::BadGrid, "horizon must be positive");
  if (base_steps == 0) throw Error(ErrorCode::BadGrid, "need at least one step");
  if (r < 2) throw Error(ErrorCode::BadGrid, "refinement ratio must be >= 2");
  if (level < 1) throw Error(ErrorCode::BadGrid, "levels start at 1");
  for (int j = 1; j < level; ++j) steps_ *= static_cast<std::size_t>(r);
}

LevelGrid LevelGrid::from_step(double horizon, double base_h, int r, int level) {
  if (!(base_h > 0.0)) throw Error(ErrorCode::BadGrid, "timestep must be positive");
  const double ratio = horizon / base_h;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(n * base_h - horizon) > 1e-9 * horizon)
    throw Error(ErrorCode::BadGrid, "timestep " + std::to_string(base_h) + " does not divide horizon " +
                                        std::to_string(horizon));
  return {horizon, static_cast<std::size_t>(n), r, level};
}

Trajectory::Trajectory(LevelGrid grid, std::size_t state_dim, Params k)
    : grid_(grid), state_dim_(state_dim), k_(std::move(k)), values_(state_dim * (grid.steps() + 1), 0.0) {}

State Trajectory::node(std::size_t i) const {
  State out(state_dim_);
  for (std::size_t m = 0; m < state_dim_; ++m) out[m] = at(m, i);
  return out;
}

Trajectory integrate(const ParameterizedOde& problem, Scheme scheme, const LevelGrid& grid,
                     std::span<const double> k) {
  const int p = scheme_order(scheme);
  const std::size_t n_steps = grid.steps();
  if (is_multistep(scheme) && n_steps < static_cast<std::size_t>(p))
    throw Error(ErrorCode::BadGrid, "grid has " + std::to_string(n_steps) + " steps; " +
                                        std::string(scheme_name(scheme)) + " needs at least " + std::to_string(p));
  if (k.size() != problem.param_dim) throw Error(ErrorCode::InvalidArgument, "parameter dimension mismatch");

  const std::size_t m = problem.state_dim;
  const double h = grid.step();
  Trajectory traj(grid, m, Params(k.begin(), k.end()));
  State u = problem.eval_initial(k);
  check_finite(u, 0);
  auto store = [&](std::size_t i) {
    for (std::size_t c = 0; c < m; ++c) traj.at(c, i) = u[c];
  };
  store(0);

  RkStepper rk(problem, tableau_for_order(p), k);
  if (!is_multistep(scheme)) {
    for (std::size_t i = 0; i < n_steps; ++i) {
      rk.step(grid.time(i), h, u);
      check_finite(u, i + 1);
      store(i + 1);
    }
    return traj;
  }

  // history[0] is f at the newest node.
  const auto weights = ab_weights(p);
  std::vector<State> history(static_cast<std::size_t>(p), State(m));
  problem.rhs(0.0, u, k, history[0]);
  std::size_t i = 0;
  for (; i + 1 < static_cast<std::size_t>(p); ++i) {
    rk.step(grid.time(i), h, u);
    check_finite(u, i + 1);
    store(i + 1);
    std::rotate(history.rbegin(), history.rbegin() + 1, history.rend());
    problem.rhs(grid.time(i + 1), u, k, history[0]);
  }
  for (; i < n_steps; ++i) {
    for (std::size_t c = 0; c < m; ++c) {
      double acc = 0.0;
      for (std::size_t q = 0; q < weights.size(); ++q) acc += weights[q] * history[q][c];
      u[c] += h * acc;
    }
    check_finite(u, i + 1);
    store(i + 1);
    if (i + 1 < n_steps) {
      std::rotate(history.rbegin(), history.rbegin() + 1, history.rend());
      problem.rhs(grid.time(i + 1), u, k, history[0]);
    }
  }
  return traj;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::ArithmeticDegenerate, "slope fit needs at least two paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
      throw Error(ErrorCode::ArithmeticDegenerate, "log of a nonpositive value in slope fit");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw Error(ErrorCode::ArithmeticDegenerate, "all abscissae equal in slope fit");
  return (n * sxy - sx * sy) / den;
}

double convergence_slope(const ParameterizedOde& problem, Scheme scheme, std::span<const double> k,
                         std::span<const double> h_list, double t_eval) {
  if (h_list.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two timesteps");
  const double horizon = problem.horizon;

  State reference;
  if (problem.has_exact()) {
    reference = problem.eval_exact(t_eval, k);
  } else {
    const double h_min = *std::min_element(h_list.begin(), h_list.end());
    const LevelGrid fine = LevelGrid::from_step(horizon, h_min, 2, 1).at_level(7);  // h_min / 64
    const Trajectory ref = integrate(problem, Scheme::RK4, fine, k);
    reference = ref.node(static_cast<std::size_t>(std::llround(t_eval / fine.step())));
  }

  std::vector<double> errors;
  for (double h : h_list) {
    const LevelGrid grid = LevelGrid::from_step(horizon, h, 2, 1);
    const double idx = t_eval / grid.step();
    const auto node = static_cast<std::size_t>(std::llround(idx));
    if (std::abs(idx - static_cast<double>(node)) > 1e-9 || node > grid.steps())
      throw Error(ErrorCode::BadGrid, "t_eval is not a node of the grid with h=" + std::to_string(h));
    const Trajectory traj = integrate(problem, scheme, grid, k);
    double err = 0.0;
    for (std::size_t c = 0; c < problem.state_dim; ++c) err = std::max(err, std::abs(traj.at(c, node) - reference[c]));
    errors.push_back(err);
  }
  return loglog_slope(h_list, errors);
}

}  // namespace mfaccel
