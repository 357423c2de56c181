#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mfaccel/greedy.hpp"
#include "mfaccel/integrate.hpp"
#include "mfaccel/linalg.hpp"
#include "mfaccel/ode.hpp"
#include "mfaccel/quadrature.hpp"

namespace mfaccel {

inline constexpr int kLevels = 3;

/// Offline product: selected parameters plus their level 1..3 snapshots and
/// the factored level-1 Gram matrix. Immutable once built.
struct SurrogateModel {
  ParameterizedOde problem;
  Scheme scheme = Scheme::RK4;
  LevelGrid base_grid{1.0, 1, 2, 1};  ///< level 1
  std::size_t training_size = 0;      ///< Q
  double tol = 0.0;
  std::uint64_t seed = 0;

  std::vector<Params> selected;              ///< K_n in greedy order
  std::vector<double> selection_residuals;   ///< squared greedy residuals
  std::array<std::vector<Trajectory>, kLevels> snapshots;  ///< [level-1][q]

  QuadratureWeights level1_weights{base_grid, 1, {}};
  linalg::ExtSymMatrix gram;    ///< level-1 Gram of the selected snapshots
  linalg::ExtMatrix gram_factor;  ///< its Cholesky factor

  [[nodiscard]] std::size_t size() const noexcept { return selected.size(); }
  [[nodiscard]] LevelGrid grid(int level) const { return base_grid.at_level(level); }

  /// Recomputes weights, Gram matrix and factor from the level-1 snapshots.
  /// Throws IllConditioned when the Gram matrix is not numerically SPD.
  void assemble();
};

struct OfflineOptions {
  std::size_t training_size = 100;  ///< Q
  std::size_t n_max = 13;
  double tol = 1e-12;
  std::uint64_t seed = 0;
};

/// Monte Carlo training set on the domain (seeded mt19937_64).
std::vector<Params> sample_parameters(const ParamDomain& domain, std::size_t count, std::uint64_t seed);

SurrogateModel build_offline(const ParameterizedOde& problem, Scheme scheme, const LevelGrid& base_grid,
                             const OfflineOptions& options);

/// Low-fidelity-equivalent cost of the offline stage: Q + n r + n r^2.
double offline_cost_units(const SurrogateModel& model);

struct MultiFidelityPrediction {
  Params k;
  std::vector<double> coefficients;  ///< v_1(k)
  std::vector<Trajectory> levels;     ///< u-hat_1, u-hat_2, u-hat_3

  [[nodiscard]] const Trajectory& level(int j) const { return levels.at(static_cast<std::size_t>(j - 1)); }
};

/// Online stage: one level-1 solve at k, the level-1 normal equations, and
/// coefficient combinations of the stored snapshots. `basis_size` restricts the
/// basis to a prefix of the greedy order.
MultiFidelityPrediction predict(const SurrogateModel& model, std::span<const double> k,
                                std::optional<std::size_t> basis_size = std::nullopt);

/// Same as predict() but with an already computed level-1 trajectory at k.
MultiFidelityPrediction predict_from_level1(const SurrogateModel& model, const Trajectory& u1,
                                            std::optional<std::size_t> basis_size = std::nullopt);

using ReferenceFn = std::function<State(double t, std::span<const double> k)>;

struct BasisSizeError {
  std::size_t basis_size;
  std::array<double, kLevels> sup_error;  ///< sup over k, nodes, components of |u-hat_j - u|
};

/// Error of the prefix surrogates n' = 1..n against a reference solution.
std::vector<BasisSizeError> surrogate_error_vs_n(const SurrogateModel& model, std::span<const Params> k_grid,
                                                 const ReferenceFn& reference);

/// Binary model container; see docs/model_format.md.
void save_model(const SurrogateModel& model, const std::filesystem::path& path);
SurrogateModel load_model(const std::filesystem::path& path);

}  // namespace mfaccel
