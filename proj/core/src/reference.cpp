#include "mfaccel/reference.hpp"

#include <cmath>

#include "mfaccel/error.hpp"
#include "mfaccel/integrate.hpp"

namespace mfaccel {

ReferenceSolution::ReferenceSolution(ParameterizedOde problem, double fine_step)
    : problem_(std::move(problem)), fine_step_(fine_step) {
  if (!(fine_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "fine step must be positive");
}

const std::vector<SplineCurve>& ReferenceSolution::curves_for(std::span<const double> k) const {
  const Params key(k.begin(), k.end());
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return *it->second;
  }
  const LevelGrid grid = LevelGrid::from_step(problem_.horizon, fine_step_, 2, 1);
  auto curves = std::make_shared<const std::vector<SplineCurve>>(
      lift_trajectory(integrate(problem_, Scheme::RK4, grid, k), 5));
  std::lock_guard lock(mutex_);
  return *cache_.emplace(key, std::move(curves)).first->second;
}

State ReferenceSolution::at(double t, std::span<const double> k) const {
  if (problem_.has_exact()) return problem_.eval_exact(t, k);
  const auto& curves = curves_for(k);
  State out(curves.size());
  for (std::size_t m = 0; m < curves.size(); ++m) out[m] = curves[m].eval(t);
  return out;
}

ReferenceFn ReferenceSolution::as_function() const {
  return [this](double t, std::span<const double> k) { return at(t, k); };
}

std::vector<double> uniform_times(double horizon, double step) {
  const LevelGrid grid = LevelGrid::from_step(horizon, step, 2, 1);
  std::vector<double> t(grid.steps() + 1);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = grid.time(i);
  return t;
}

}  // namespace mfaccel
