#include "mfaccel/greedy.hpp"

#include <algorithm>
#include <string>

#include "mfaccel/error.hpp"

namespace mfaccel {

namespace {

void check_ensemble(const TrainingEnsemble& ensemble, std::size_t n_max) {
  if (ensemble.size() == 0) throw Error(ErrorCode::InvalidArgument, "training ensemble is empty");
  if (n_max > ensemble.size())
    throw Error(ErrorCode::InvalidArgument, "n_max=" + std::to_string(n_max) + " exceeds Q=" +
                                                std::to_string(ensemble.size()));
}

}  // namespace

SelectionResult select(const TrainingEnsemble& ensemble, std::size_t n_max, double tol) {
  check_ensemble(ensemble, n_max);
  const auto g = gram_matrix<extended>(ensemble.trajectories, ensemble.weights);
  const auto chol = linalg::pivoted_cholesky(g, n_max, tol);
  if (n_max > 0 && chol.pivots.empty())
    throw Error(ErrorCode::EmptySelection, "all training snapshots have (numerically) zero norm");
  SelectionResult out{chol.pivots, {}};
  for (extended d : chol.residual_diag) out.residual_norms.push_back(static_cast<double>(d));
  return out;
}

SelectionResult brute_force_greedy(const TrainingEnsemble& ensemble, std::size_t n_max, double tol) {
  check_ensemble(ensemble, n_max);
  const auto& snaps = ensemble.trajectories;
  const auto& w = ensemble.weights;
  const std::size_t q_count = snaps.size();

  extended max_norm = 0;
  for (const auto& s : snaps) max_norm = std::max(max_norm, inner_product<extended>(s, s, w));

  SelectionResult out;
  std::vector<Trajectory> basis;
  std::vector<char> taken(q_count, 0);
  const std::size_t m = snaps.front().state_dim();
  for (std::size_t step = 0; step < n_max; ++step) {
    std::size_t best = q_count;
    extended best_res = -1;
    for (std::size_t c = 0; c < q_count; ++c) {
      if (taken[c]) continue;
      std::vector<extended> v;
      if (!basis.empty()) {
        const auto [g, f] = gram_and_rhs<extended>(basis, snaps[c], w);
        v = linalg::solve_spd(g, f, 64 * kExtendedEpsilon);
      }
      // Weighted norm of the explicit residual u - sum_b v_b u_b.
      extended res = 0;
      const auto u = snaps[c].values();
      const std::size_t nodes = snaps[c].nodes();
      for (std::size_t i = 0; i < u.size(); ++i) {
        extended r = u[i];
        for (std::size_t b = 0; b < basis.size(); ++b) r -= v[b] * extended(basis[b].values()[i]);
        res += extended(w.w[i % nodes]) * r * r;
      }
      res /= extended(static_cast<double>(m));
      if (res > best_res) {
        best_res = res;
        best = c;
      }
    }
    if (best == q_count || best_res <= extended(tol) * max_norm || best_res <= 0) break;
    taken[best] = 1;
    basis.push_back(snaps[best]);
    out.indices.push_back(best);
    out.residual_norms.push_back(static_cast<double>(best_res));
  }
  if (n_max > 0 && out.indices.empty())
    throw Error(ErrorCode::EmptySelection, "all training snapshots have (numerically) zero norm");
  return out;
}

}  // namespace mfaccel
