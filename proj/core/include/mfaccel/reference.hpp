#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "mfaccel/ode.hpp"
#include "mfaccel/spline.hpp"
#include "mfaccel/surrogate.hpp"

namespace mfaccel {

/// "Exact" solution oracle: the closed form when the problem has one,
/// otherwise an RK4 run with a fine step lifted by a quintic spline. Fine
/// runs are cached per parameter value; at() is safe to call concurrently.
class ReferenceSolution {
 public:
  explicit ReferenceSolution(ParameterizedOde problem, double fine_step = 1e-3);

  [[nodiscard]] State at(double t, std::span<const double> k) const;
  [[nodiscard]] const ParameterizedOde& problem() const noexcept { return problem_; }
  [[nodiscard]] ReferenceFn as_function() const;

 private:
  const std::vector<SplineCurve>& curves_for(std::span<const double> k) const;

  ParameterizedOde problem_;
  double fine_step_;
  mutable std::mutex mutex_;
  mutable std::map<Params, std::shared_ptr<const std::vector<SplineCurve>>> cache_;
};

/// 0, h, 2h, ..., T with h dividing T.
std::vector<double> uniform_times(double horizon, double step);

}  // namespace mfaccel
