#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mfaccel/ode.hpp"

namespace mfaccel {

enum class Scheme { RK2, RK3, RK4, AB2, AB3, AB4 };

inline constexpr Scheme kAllSchemes[] = {Scheme::RK2, Scheme::RK3, Scheme::RK4,
                                         Scheme::AB2, Scheme::AB3, Scheme::AB4};

/// Classical global order of the scheme.
int scheme_order(Scheme s) noexcept;
bool is_multistep(Scheme s) noexcept;
std::string_view scheme_name(Scheme s) noexcept;  // "RK2", ...
/// Case-insensitive; throws UnknownScheme.
Scheme parse_scheme(std::string_view name);

/// Level j of the timestep hierarchy h_j = h / r^(j-1), N_j = N r^(j-1).
class LevelGrid {
 public:
  LevelGrid(double horizon, std::size_t base_steps, int r, int level = 1);

  /// Derives N from T / h; throws BadGrid unless N h == T to 1e-9 relative.
  static LevelGrid from_step(double horizon, double base_h, int r, int level = 1);

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t base_steps() const noexcept { return base_steps_; }
  [[nodiscard]] int ratio() const noexcept { return r_; }
  [[nodiscard]] int level() const noexcept { return level_; }
  [[nodiscard]] double base_step() const noexcept { return horizon_ / static_cast<double>(base_steps_); }
  /// N_j.
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  /// h_j.
  [[nodiscard]] double step() const noexcept { return horizon_ / static_cast<double>(steps_); }
  [[nodiscard]] double time(std::size_t i) const noexcept { return static_cast<double>(i) * step(); }
  [[nodiscard]] LevelGrid at_level(int level) const { return {horizon_, base_steps_, r_, level}; }

  friend bool operator==(const LevelGrid&, const LevelGrid&) = default;

 private:
  double horizon_;
  std::size_t base_steps_;
  int r_;
  int level_;
  std::size_t steps_;
};

/// Discrete solution u_j(i, k), stored component-major: M rows of N_j + 1 values.
class Trajectory {
 public:
  Trajectory(LevelGrid grid, std::size_t state_dim, Params k);

  [[nodiscard]] const LevelGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] std::size_t state_dim() const noexcept { return state_dim_; }
  [[nodiscard]] std::size_t nodes() const noexcept { return grid_.steps() + 1; }
  [[nodiscard]] const Params& param() const noexcept { return k_; }

  double& at(std::size_t m, std::size_t i) noexcept { return values_[m * nodes() + i]; }
  [[nodiscard]] double at(std::size_t m, std::size_t i) const noexcept { return values_[m * nodes() + i]; }
  [[nodiscard]] std::span<const double> component(std::size_t m) const noexcept {
    return {values_.data() + m * nodes(), nodes()};
  }
  [[nodiscard]] std::span<double> component(std::size_t m) noexcept {
    return {values_.data() + m * nodes(), nodes()};
  }
  [[nodiscard]] State node(std::size_t i) const;
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

 private:
  LevelGrid grid_;
  std::size_t state_dim_;
  Params k_;
  std::vector<double> values_;
};

/// Fixed-step explicit integration over the whole grid. Adams-Bashforth
/// schemes take their first p-1 steps with the Runge-Kutta scheme of the same
/// order. Throws BadGrid if an Adams-Bashforth grid has N_j < p and
/// NonFiniteState on blow-up.
Trajectory integrate(const ParameterizedOde& problem, Scheme scheme, const LevelGrid& grid,
                     std::span<const double> k);

/// Least-squares slope of log(y) against log(x). Throws ArithmeticDegenerate
/// when any value is nonpositive or fewer than two points are given.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Observed order at time t_eval: max-norm error against the closed form (or a
/// fine RK4 reference when the problem has none) for each step in h_list,
/// fitted with loglog_slope. Every h must put t_eval on a grid node.
double convergence_slope(const ParameterizedOde& problem, Scheme scheme, std::span<const double> k,
                         std::span<const double> h_list, double t_eval);

}  // namespace mfaccel
