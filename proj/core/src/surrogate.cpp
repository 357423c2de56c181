#include "mfaccel/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "mfaccel/error.hpp"

namespace mfaccel {

void SurrogateModel::assemble() {
  const int p = scheme_order(scheme);
  level1_weights = composite_weights(base_grid, p);
  gram = gram_matrix<extended>(snapshots[0], level1_weights);
  try {
    gram_factor = linalg::cholesky(gram, 64 * kExtendedEpsilon);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularSystem) throw;
    throw Error(ErrorCode::IllConditioned,
                "selected level-1 snapshots are numerically dependent: " + std::string(e.what()));
  }
}

std::vector<Params> sample_parameters(const ParamDomain& domain, std::size_t count, std::uint64_t seed) {
  domain.validate();
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> dists;
  for (std::size_t i = 0; i < domain.dim(); ++i) dists.emplace_back(domain.lower[i], domain.upper[i]);
  std::vector<Params> out(count, Params(domain.dim()));
  for (auto& k : out)
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = dists[i](rng);
  return out;
}

SurrogateModel build_offline(const ParameterizedOde& problem, Scheme scheme, const LevelGrid& base_grid,
                             const OfflineOptions& options) {
  if (options.n_max == 0) throw Error(ErrorCode::InvalidArgument, "n_max must be at least 1");
  if (options.training_size < options.n_max)
    throw Error(ErrorCode::InvalidArgument, "training size Q=" + std::to_string(options.training_size) +
                                                " is smaller than n=" + std::to_string(options.n_max));
  if (base_grid.level() != 1) throw Error(ErrorCode::BadGrid, "surrogate needs the level-1 grid");
  if (std::abs(base_grid.horizon() - problem.horizon) > 1e-12 * problem.horizon)
    throw Error(ErrorCode::BadGrid, "grid horizon differs from the problem horizon");

  const int p = scheme_order(scheme);
  TrainingEnsemble ensemble{sample_parameters(problem.domain, options.training_size, options.seed),
                            {},
                            composite_weights(base_grid, p)};
  ensemble.trajectories.reserve(ensemble.params.size());
  for (const auto& k : ensemble.params) ensemble.trajectories.push_back(integrate(problem, scheme, base_grid, k));

  const SelectionResult sel = select(ensemble, options.n_max, options.tol);

  SurrogateModel model;
  model.problem = problem;
  model.scheme = scheme;
  model.base_grid = base_grid;
  model.training_size = options.training_size;
  model.tol = options.tol;
  model.seed = options.seed;
  model.selection_residuals = sel.residual_norms;
  for (std::size_t idx : sel.indices) {
    model.selected.push_back(ensemble.params[idx]);
    model.snapshots[0].push_back(ensemble.trajectories[idx]);
  }
  for (int j = 2; j <= kLevels; ++j) {
    const LevelGrid grid = base_grid.at_level(j);
    for (const auto& k : model.selected)
      model.snapshots[static_cast<std::size_t>(j - 1)].push_back(integrate(problem, scheme, grid, k));
  }
  model.assemble();
  return model;
}

double offline_cost_units(const SurrogateModel& model) {
  const double r = model.base_grid.ratio();
  const double n = static_cast<double>(model.size());
  return static_cast<double>(model.training_size) + n * r + n * r * r;
}

MultiFidelityPrediction predict_from_level1(const SurrogateModel& model, const Trajectory& u1,
                                            std::optional<std::size_t> basis_size) {
  const std::size_t n = basis_size.value_or(model.size());
  if (n == 0 || n > model.size())
    throw Error(ErrorCode::InvalidArgument, "basis size must be in 1.." + std::to_string(model.size()));

  std::vector<extended> f(n);
  for (std::size_t q = 0; q < n; ++q)
    f[q] = inner_product<extended>(u1, model.snapshots[0][q], model.level1_weights);
  const std::vector<extended> v_ext = n == model.size()
                                          ? linalg::cholesky_solve(model.gram_factor, f)
                                          : linalg::solve_spd(model.gram.leading(n), f, 64 * kExtendedEpsilon);
  const std::vector<double> v(v_ext.begin(), v_ext.end());

  MultiFidelityPrediction out;
  out.k = u1.param();
  out.coefficients = v;
  const std::size_t m = model.problem.state_dim;
  for (int j = 1; j <= kLevels; ++j) {
    const auto& snaps = model.snapshots[static_cast<std::size_t>(j - 1)];
    Trajectory hat(model.grid(j), m, out.k);
    auto dst = hat.values();
    for (std::size_t q = 0; q < n; ++q) {
      const auto src = snaps[q].values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += v[q] * src[i];
    }
    out.levels.push_back(std::move(hat));
  }
  return out;
}

MultiFidelityPrediction predict(const SurrogateModel& model, std::span<const double> k,
                                std::optional<std::size_t> basis_size) {
  const Trajectory u1 = integrate(model.problem, model.scheme, model.base_grid, k);
  return predict_from_level1(model, u1, basis_size);
}

std::vector<BasisSizeError> surrogate_error_vs_n(const SurrogateModel& model, std::span<const Params> k_grid,
                                                 const ReferenceFn& reference) {
  std::vector<BasisSizeError> rows;
  for (std::size_t n = 1; n <= model.size(); ++n) rows.push_back({n, {0.0, 0.0, 0.0}});

  for (const auto& k : k_grid) {
    const Trajectory u1 = integrate(model.problem, model.scheme, model.base_grid, k);
    // Reference sampled once per level; level nodes are shared by every n'.
    std::array<Trajectory, kLevels> ref{Trajectory(model.grid(1), model.problem.state_dim, k),
                                        Trajectory(model.grid(2), model.problem.state_dim, k),
                                        Trajectory(model.grid(3), model.problem.state_dim, k)};
    for (auto& r : ref)
      for (std::size_t i = 0; i < r.nodes(); ++i) {
        const State s = reference(r.grid().time(i), k);
        for (std::size_t c = 0; c < r.state_dim(); ++c) r.at(c, i) = s[c];
      }
    for (auto& row : rows) {
      const auto pred = predict_from_level1(model, u1, row.basis_size);
      for (int j = 1; j <= kLevels; ++j) {
        const auto a = pred.level(j).values();
        const auto b = ref[static_cast<std::size_t>(j - 1)].values();
        double err = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
        auto& slot = row.sup_error[static_cast<std::size_t>(j - 1)];
        slot = std::max(slot, err);
      }
    }
  }
  return rows;
}

}  // namespace mfaccel
