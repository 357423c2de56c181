#include "mfaccel/accel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mfaccel/error.hpp"

namespace mfaccel {

double richardson_weight(double p, int r) {
  const double rp = std::pow(static_cast<double>(r), p);
  return rp / (rp - 1.0);
}

OrderEstimate estimate_order(double x1, double x2, double x3, int r) {
  OrderEstimate est;
  est.p_star = std::numeric_limits<double>::quiet_NaN();
  est.c_star = std::numeric_limits<double>::quiet_NaN();
  if (r < 2) return est;
  const double scale = std::max({std::abs(x1), std::abs(x2), std::abs(x3)});
  const double d12 = x1 - x2;
  const double d23 = x2 - x3;
  if (!(std::abs(d23) > 1e-14 * scale)) return est;
  const double ratio = d12 / d23;
  if (!(ratio > 0.0) || !std::isfinite(ratio)) return est;
  const double p = std::log(ratio) / std::log(static_cast<double>(r));
  if (!(p > 0.0) || !std::isfinite(p)) return est;
  est.p_star = p;
  est.c_star = richardson_weight(p, r);
  est.valid = true;
  return est;
}

WeightRule parse_weight_rule(std::string_view name) {
  if (name == "estimated") return WeightRule::Estimated;
  if (name == "nominal") return WeightRule::Nominal;
  throw Error(ErrorCode::InvalidArgument, "unknown weight rule '" + std::string(name) + "' (estimated|nominal)");
}

std::string_view weight_rule_name(WeightRule rule) noexcept {
  return rule == WeightRule::Nominal ? "nominal" : "estimated";
}

namespace {

std::vector<double> weights_of(const std::vector<OrderEstimate>& orders) {
  std::vector<double> w;
  for (const auto& o : orders) w.push_back(o.c_star);
  return w;
}

}  // namespace

AcceleratedSolution::AcceleratedSolution(std::vector<std::array<SplineCurve, kLevels>> curves,
                                         std::vector<OrderEstimate> orders, int r)
    : AcceleratedSolution(std::move(curves), orders, weights_of(orders), r) {}

AcceleratedSolution::AcceleratedSolution(std::vector<std::array<SplineCurve, kLevels>> curves,
                                         std::vector<OrderEstimate> orders, std::vector<double> weights, int r)
    : curves_(std::move(curves)), orders_(std::move(orders)), weights_(std::move(weights)), r_(r) {
  if (curves_.empty() || curves_.size() != orders_.size())
    throw Error(ErrorCode::InvalidArgument, "one order estimate per component is required");
  if (weights_.size() != curves_.size()) throw Error(ErrorCode::InvalidArgument, "one weight per component is required");
}

State AcceleratedSolution::eval(double t) const {
  State out(curves_.size());
  for (std::size_t m = 0; m < curves_.size(); ++m)
    out[m] = richardson(curves_[m][1].eval(t), curves_[m][2].eval(t), weights_[m]);
  return out;
}

State AcceleratedSolution::eval_with_weight(double c, double t) const {
  State out(curves_.size());
  for (std::size_t m = 0; m < curves_.size(); ++m)
    out[m] = richardson(curves_[m][1].eval(t), curves_[m][2].eval(t), c);
  return out;
}

State AcceleratedSolution::eval_level(int level, double t) const {
  if (level < 1 || level > kLevels) throw Error(ErrorCode::InvalidArgument, "level must be 1..3");
  State out(curves_.size());
  for (std::size_t m = 0; m < curves_.size(); ++m) out[m] = curves_[m][static_cast<std::size_t>(level - 1)].eval(t);
  return out;
}

double default_reference_time(const LevelGrid& grid) {
  const double h = grid.at_level(1).step();
  return std::round(0.5 * grid.horizon() / h) * h;
}

AcceleratedSolution accelerate(const MultiFidelityPrediction& prediction, int degree, double reference_time,
                               int scheme_order, WeightRule rule) {
  if (prediction.levels.size() != kLevels)
    throw Error(ErrorCode::InvalidArgument, "prediction must carry all three levels");
  const Trajectory& first = prediction.level(1);
  const double horizon = first.grid().horizon();
  if (!(reference_time >= 0.0 && reference_time <= horizon))
    throw Error(ErrorCode::OutOfDomain, "reference time " + std::to_string(reference_time) + " outside [0, T]");
  const int r = first.grid().ratio();

  std::array<std::vector<SplineCurve>, kLevels> lifted;
  for (int j = 1; j <= kLevels; ++j) lifted[static_cast<std::size_t>(j - 1)] = lift_trajectory(prediction.level(j), degree);

  std::vector<std::array<SplineCurve, kLevels>> curves;
  std::vector<OrderEstimate> orders;
  std::vector<double> weights;
  for (std::size_t m = 0; m < first.state_dim(); ++m) {
    curves.push_back({lifted[0][m], lifted[1][m], lifted[2][m]});
    OrderEstimate est = estimate_order(lifted[0][m].eval(reference_time), lifted[1][m].eval(reference_time),
                                       lifted[2][m].eval(reference_time), r);
    est.reference_time = reference_time;
    if (!est.valid) {
      est.p_star = scheme_order;
      est.c_star = richardson_weight(scheme_order, r);
    }
    weights.push_back(rule == WeightRule::Nominal ? richardson_weight(scheme_order, r) : est.c_star);
    orders.push_back(est);
  }
  return AcceleratedSolution(std::move(curves), std::move(orders), std::move(weights), r);
}

}  // namespace mfaccel
