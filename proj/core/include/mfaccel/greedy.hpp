#pragma once

#include <cstddef>
#include <vector>

#include "mfaccel/quadrature.hpp"

namespace mfaccel {

/// Level-1 training set standing in for the parameter continuum.
struct TrainingEnsemble {
  std::vector<Params> params;
  std::vector<Trajectory> trajectories;
  QuadratureWeights weights;

  [[nodiscard]] std::size_t size() const noexcept { return trajectories.size(); }
};

struct SelectionResult {
  std::vector<std::size_t> indices;     ///< training indices in selection order
  std::vector<double> residual_norms;   ///< squared projection residual at each pick
};

/// Greedy residual maximization realized as pivoted Cholesky of the Q-by-Q
/// level-1 Gram matrix. `tol` is relative to the largest squared norm.
/// Throws EmptySelection when every snapshot is (numerically) zero.
SelectionResult select(const TrainingEnsemble& ensemble, std::size_t n_max, double tol);

/// Reference implementation: projects every candidate explicitly onto the
/// span of the current picks and takes the largest residual (lowest index on
/// ties). Quadratic in Q per step; intended for cross-checking select().
SelectionResult brute_force_greedy(const TrainingEnsemble& ensemble, std::size_t n_max, double tol = 0.0);

}  // namespace mfaccel
