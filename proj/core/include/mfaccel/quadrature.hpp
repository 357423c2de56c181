#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mfaccel/integrate.hpp"
#include "mfaccel/linalg.hpp"

namespace mfaccel {

/// Points-per-panel exponent P for a scheme of order p: max(2 floor((p-1)/2), 1).
/// Throws UnsupportedOrder outside 1 <= p <= 6.
int nc_point_count(int p);

/// Closed (P+1)-point Newton-Cotes weights on [0, 1], 1 <= P <= 6.
std::vector<double> newton_cotes_unit_weights(int panel_points);

/// Composite Newton-Cotes weights on a level grid, normalized to sum to one.
struct QuadratureWeights {
  LevelGrid grid;
  int panel_points;  ///< P
  std::vector<double> w;
};

/// Throws IndivisibleGrid unless P divides N_j.
QuadratureWeights composite_weights(const LevelGrid& grid, int order);

/// (1/M) sum_i w_i a(i).b(i), accumulated in T. Throws GridMismatch.
template <class T = double>
T inner_product(const Trajectory& a, const Trajectory& b, const QuadratureWeights& w);

/// Gram matrix of the snapshots. Throws GridMismatch.
template <class T = double>
linalg::BasicSymMatrix<T> gram_matrix(std::span<const Trajectory> snapshots, const QuadratureWeights& w);

/// Gram matrix plus the vector of inner products with `query`.
template <class T = double>
std::pair<linalg::BasicSymMatrix<T>, std::vector<T>> gram_and_rhs(std::span<const Trajectory> snapshots,
                                                                   const Trajectory& query,
                                                                   const QuadratureWeights& w);

extern template double inner_product(const Trajectory&, const Trajectory&, const QuadratureWeights&);
extern template extended inner_product(const Trajectory&, const Trajectory&, const QuadratureWeights&);
extern template linalg::SymMatrix gram_matrix(std::span<const Trajectory>, const QuadratureWeights&);
extern template linalg::ExtSymMatrix gram_matrix(std::span<const Trajectory>, const QuadratureWeights&);
extern template std::pair<linalg::SymMatrix, std::vector<double>> gram_and_rhs(std::span<const Trajectory>,
                                                                                const Trajectory&,
                                                                                const QuadratureWeights&);
extern template std::pair<linalg::ExtSymMatrix, std::vector<extended>> gram_and_rhs(std::span<const Trajectory>,
                                                                                     const Trajectory&,
                                                                                     const QuadratureWeights&);

}  // namespace mfaccel
