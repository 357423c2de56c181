#include "mfaccel/quadrature.hpp"

#include <string>

#include "mfaccel/error.hpp"

namespace mfaccel {

int nc_point_count(int p) {
  if (p < 1 || p > 6)
    throw Error(ErrorCode::UnsupportedOrder, "orders above 6 need Newton-Cotes rules with negative weights");
  const int even = 2 * ((p - 1) / 2);
  return even > 1 ? even : 1;
}

std::vector<double> newton_cotes_unit_weights(int panel_points) {
  switch (panel_points) {
    case 1: return {1.0 / 2, 1.0 / 2};
    case 2: return {1.0 / 6, 4.0 / 6, 1.0 / 6};
    case 3: return {1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
    case 4: return {7.0 / 90, 32.0 / 90, 12.0 / 90, 32.0 / 90, 7.0 / 90};
    case 5: return {19.0 / 288, 75.0 / 288, 50.0 / 288, 50.0 / 288, 75.0 / 288, 19.0 / 288};
    case 6: return {41.0 / 840, 216.0 / 840, 27.0 / 840, 272.0 / 840, 27.0 / 840, 216.0 / 840, 41.0 / 840};
    default:
      throw Error(ErrorCode::UnsupportedOrder, "closed Newton-Cotes rule with P=" + std::to_string(panel_points) +
                                                   " is not positive");
  }
}

QuadratureWeights composite_weights(const LevelGrid& grid, int order) {
  const int big_p = nc_point_count(order);
  const std::size_t n = grid.steps();
  const auto panel = static_cast<std::size_t>(big_p);
  if (n % panel != 0)
    throw Error(ErrorCode::IndivisibleGrid,
                "N_j=" + std::to_string(n) + " is not divisible by P=" + std::to_string(big_p));
  const auto unit = newton_cotes_unit_weights(big_p);
  const std::size_t panels = n / panel;
  const double scale = 1.0 / static_cast<double>(panels);

  QuadratureWeights out{grid, big_p, std::vector<double>(n + 1, 0.0)};
  // Panel i covers nodes i*P .. (i+1)*P; shared end nodes collect both panels.
  for (std::size_t i = 0; i < panels; ++i)
    for (std::size_t s = 0; s <= panel; ++s) out.w[i * panel + s] += scale * unit[s];
  return out;
}

namespace {

void require_grid(const Trajectory& t, const QuadratureWeights& w) {
  if (!(t.grid() == w.grid) || t.nodes() != w.w.size())
    throw Error(ErrorCode::GridMismatch, "trajectory grid does not match the quadrature grid");
}

}  // namespace

template <class T>
T inner_product(const Trajectory& a, const Trajectory& b, const QuadratureWeights& w) {
  require_grid(a, w);
  require_grid(b, w);
  if (a.state_dim() != b.state_dim()) throw Error(ErrorCode::GridMismatch, "state dimensions differ");
  const std::size_t m = a.state_dim();
  T total = 0;
  for (std::size_t c = 0; c < m; ++c) {
    const auto ac = a.component(c);
    const auto bc = b.component(c);
    T s = 0;
    for (std::size_t i = 0; i < ac.size(); ++i) s += T(w.w[i]) * T(ac[i]) * T(bc[i]);
    total += s;
  }
  return total / T(static_cast<double>(m));
}

template <class T>
linalg::BasicSymMatrix<T> gram_matrix(std::span<const Trajectory> snapshots, const QuadratureWeights& w) {
  const std::size_t n = snapshots.size();
  linalg::BasicSymMatrix<T> g(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) g.set(p, q, inner_product<T>(snapshots[p], snapshots[q], w));
  return g;
}

template <class T>
std::pair<linalg::BasicSymMatrix<T>, std::vector<T>> gram_and_rhs(std::span<const Trajectory> snapshots,
                                                                   const Trajectory& query,
                                                                   const QuadratureWeights& w) {
  std::vector<T> f(snapshots.size());
  for (std::size_t p = 0; p < snapshots.size(); ++p) f[p] = inner_product<T>(query, snapshots[p], w);
  return {gram_matrix<T>(snapshots, w), std::move(f)};
}

template double inner_product(const Trajectory&, const Trajectory&, const QuadratureWeights&);
template extended inner_product(const Trajectory&, const Trajectory&, const QuadratureWeights&);
template linalg::SymMatrix gram_matrix(std::span<const Trajectory>, const QuadratureWeights&);
template linalg::ExtSymMatrix gram_matrix(std::span<const Trajectory>, const QuadratureWeights&);
template std::pair<linalg::SymMatrix, std::vector<double>> gram_and_rhs(std::span<const Trajectory>,
                                                                         const Trajectory&,
                                                                         const QuadratureWeights&);
template std::pair<linalg::ExtSymMatrix, std::vector<extended>> gram_and_rhs(std::span<const Trajectory>,
                                                                              const Trajectory&,
                                                                              const QuadratureWeights&);

}  // namespace mfaccel
