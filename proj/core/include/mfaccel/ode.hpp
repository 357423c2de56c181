#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mfaccel {

using State = std::vector<double>;
using Params = std::vector<double>;

/// Axis-aligned parameter box.
struct ParamDomain {
  Params lower;
  Params upper;

  /// Throws InvalidArgument unless lower < upper componentwise.
  void validate() const;
  [[nodiscard]] bool contains(std::span<const double> k) const noexcept;
  [[nodiscard]] std::size_t dim() const noexcept { return lower.size(); }
};

/// du/dt = f(t, u, k) on [0, T] with u(0) = u0(k).
///
/// Existence, uniqueness and smoothness of the trajectories on the whole
/// parameter box are the caller's responsibility; nothing here checks them.
struct ParameterizedOde {
  using Rhs = std::function<void(double t, std::span<const double> u, std::span<const double> k,
                                 std::span<double> dudt)>;
  using Initial = std::function<void(std::span<const double> k, std::span<double> u0)>;
  using Exact = std::function<void(double t, std::span<const double> k, std::span<double> u)>;

  std::string name;
  std::size_t state_dim = 0;
  std::size_t param_dim = 0;
  double horizon = 0.0;
  ParamDomain domain;
  Rhs rhs;
  Initial initial;
  Exact exact;  ///< empty when no closed form is known

  [[nodiscard]] bool has_exact() const noexcept { return static_cast<bool>(exact); }

  [[nodiscard]] State eval_rhs(double t, std::span<const double> u, std::span<const double> k) const;
  [[nodiscard]] State eval_initial(std::span<const double> k) const;
  /// Throws InvalidArgument when there is no closed form.
  [[nodiscard]] State eval_exact(double t, std::span<const double> k) const;
};

/// u'' + (0.1 + k/100) u' + k u = 0, u(0) = 1, u'(0) = 10, k in [5, 25],
/// written as the first-order system (u, u'). Closed-form solution included.
ParameterizedOde damped_oscillator();

/// Lotka-Volterra with a = k + 0.5, b = 3k + 1, c = k + 1, d = k + 0.5,
/// (x0, y0) = (1, 1), k in [0.5, 1.5]. No closed form.
ParameterizedOde predator_prey();

/// Registry lookup: "oscillator" or "predator-prey". Throws UnknownProblem.
ParameterizedOde make_problem(std::string_view name);
std::vector<std::string> problem_names();

}  // namespace mfaccel
