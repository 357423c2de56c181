#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "mfaccel/spline.hpp"
#include "mfaccel/surrogate.hpp"

namespace mfaccel {

struct OrderEstimate {
  double p_star = 0.0;
  double c_star = 0.0;
  double reference_time = 0.0;
  /// False when the three values are not a contracting sequence (ratio <= 0)
  /// or have already converged; p_star/c_star then hold the fallback order.
  bool valid = false;
};

/// c = r^p / (r^p - 1).
double richardson_weight(double p, int r);

/// p* = log_r((x1 - x2) / (x2 - x3)). Never throws; degenerate input comes
/// back with valid == false and p_star = NaN.
OrderEstimate estimate_order(double x1, double x2, double x3, int r);

/// How accelerate() picks the extrapolation weight of each component.
enum class WeightRule {
  Estimated,  ///< c* from the order estimated at the reference time
  Nominal,    ///< c from the scheme order; the estimate is still reported
};

/// Parses "estimated" / "nominal". Throws InvalidArgument.
WeightRule parse_weight_rule(std::string_view name);
std::string_view weight_rule_name(WeightRule rule) noexcept;

/// c x3 + (1 - c) x2.
inline double richardson(double x2, double x3, double c) noexcept { return c * x3 + (1.0 - c) * x2; }

/// Continuous-time extrapolated surrogate. Each state component carries its
/// own order estimate, computed once at the reference time and used for all t.
class AcceleratedSolution {
 public:
  /// Weights default to the c* of each order estimate.
  AcceleratedSolution(std::vector<std::array<SplineCurve, kLevels>> curves, std::vector<OrderEstimate> orders,
                      int r);
  AcceleratedSolution(std::vector<std::array<SplineCurve, kLevels>> curves, std::vector<OrderEstimate> orders,
                      std::vector<double> weights, int r);

  [[nodiscard]] std::size_t state_dim() const noexcept { return curves_.size(); }
  [[nodiscard]] const std::vector<OrderEstimate>& orders() const noexcept { return orders_; }
  /// Weight applied to each component by eval().
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] int ratio() const noexcept { return r_; }
  [[nodiscard]] double horizon() const noexcept { return curves_.front()[0].horizon(); }
  [[nodiscard]] const SplineCurve& curve(int level, std::size_t component) const {
    return curves_.at(component).at(static_cast<std::size_t>(level - 1));
  }

  /// w*(t) with the per-component weights.
  [[nodiscard]] State eval(double t) const;
  /// c w3(t) + (1 - c) w2(t) with one weight for every component.
  [[nodiscard]] State eval_with_weight(double c, double t) const;
  /// Spline of surrogate level j at t.
  [[nodiscard]] State eval_level(int level, double t) const;

 private:
  std::vector<std::array<SplineCurve, kLevels>> curves_;
  std::vector<OrderEstimate> orders_;
  std::vector<double> weights_;
  int r_;
};

/// T/2 rounded to the nearest level-1 node (shared by all levels).
double default_reference_time(const LevelGrid& grid);

/// Lifts u-hat_1..3 with degree-`degree` splines and estimates the order per
/// component at reference_time, falling back to `scheme_order` when the
/// estimate is invalid. With WeightRule::Nominal every component uses the
/// weight of `scheme_order` instead.
AcceleratedSolution accelerate(const MultiFidelityPrediction& prediction, int degree, double reference_time,
                               int scheme_order, WeightRule rule = WeightRule::Estimated);

}  // namespace mfaccel
