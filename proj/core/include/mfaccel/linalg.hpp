#pragma once

// Small dense kernels: pivoted Cholesky of Gram matrices, SPD solves and the
// banded LU used by spline collocation.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <type_traits>
#include <vector>

#include "mfaccel/extended.hpp"

namespace mfaccel::linalg {

/// Row-major dense matrix.
template <class T>
class BasicMatrix {
 public:
  BasicMatrix() = default;
  BasicMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  BasicMatrix(std::initializer_list<std::initializer_list<T>> rows);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  T operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  [[nodiscard]] std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  [[nodiscard]] std::span<const T> data() const noexcept { return data_; }

  [[nodiscard]] std::vector<T> apply(std::span<const std::type_identity_t<T>> x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Square symmetric matrix. Symmetry is validated by the operations that rely
/// on it, not on every write.
template <class T>
class BasicSymMatrix {
 public:
  BasicSymMatrix() = default;
  explicit BasicSymMatrix(std::size_t n) : m_(n, n) {}
  BasicSymMatrix(std::initializer_list<std::initializer_list<T>> rows);
  explicit BasicSymMatrix(BasicMatrix<T> m);

  [[nodiscard]] std::size_t size() const noexcept { return m_.rows(); }

  T& operator()(std::size_t i, std::size_t j) noexcept { return m_(i, j); }
  T operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }

  /// Sets (i,j) and (j,i) together.
  void set(std::size_t i, std::size_t j, T v) noexcept {
    m_(i, j) = v;
    m_(j, i) = v;
  }

  [[nodiscard]] const BasicMatrix<T>& dense() const noexcept { return m_; }
  [[nodiscard]] std::vector<T> apply(std::span<const std::type_identity_t<T>> x) const { return m_.apply(x); }
  [[nodiscard]] T max_diagonal() const noexcept;

  /// Leading k-by-k block.
  [[nodiscard]] BasicSymMatrix leading(std::size_t k) const;

  /// Entrywise conversion, e.g. to double for reporting.
  template <class U>
  [[nodiscard]] BasicSymMatrix<U> cast() const {
    BasicSymMatrix<U> out(size());
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) out(i, j) = static_cast<U>(m_(i, j));
    return out;
  }

  /// Throws NonSymmetric unless |a_ij - a_ji| <= 1e-12 * max|a| and all entries are finite.
  void check_symmetric() const;

 private:
  BasicMatrix<T> m_;
};

using Matrix = BasicMatrix<double>;
using SymMatrix = BasicSymMatrix<double>;
using ExtMatrix = BasicMatrix<extended>;
using ExtSymMatrix = BasicSymMatrix<extended>;

template <class T>
struct PivotedCholeskyResult {
  /// Pivot indices in selection order.
  std::vector<std::size_t> pivots;
  /// n-by-k factor, rows in the original ordering: G ~= L L^T on the retained pivots.
  BasicMatrix<T> factor;
  /// Residual diagonal entry at each pivot when it was chosen. Non-increasing.
  std::vector<T> residual_diag;
  /// Largest remaining residual diagonal after the last step.
  T max_remaining = T(0);
};

/// Greedy diagonal-pivoted Cholesky. Stops after n_max pivots or once the
/// largest remaining diagonal is <= tol * (initial largest diagonal).
/// Ties go to the lowest index.
template <class T>
PivotedCholeskyResult<T> pivoted_cholesky(const BasicSymMatrix<T>& g, std::size_t n_max, double tol);

/// Lower Cholesky factor of an SPD matrix. Throws SingularSystem when a pivot
/// is not positive or drops below `rel_floor` times the largest diagonal.
template <class T>
BasicMatrix<T> cholesky(const BasicSymMatrix<T>& g, double rel_floor = 1e-14);

/// Solves L L^T x = f with a factor from cholesky().
template <class T>
std::vector<T> cholesky_solve(const BasicMatrix<T>& lower, std::span<const std::type_identity_t<T>> f);

template <class T>
std::vector<T> solve_spd(const BasicSymMatrix<T>& g, std::span<const std::type_identity_t<T>> f,
                         double rel_floor = 1e-14);

#define MFACCEL_LINALG_EXTERN(T)                                                                    \
  extern template class BasicMatrix<T>;                                                             \
  extern template class BasicSymMatrix<T>;                                                          \
  extern template PivotedCholeskyResult<T> pivoted_cholesky(const BasicSymMatrix<T>&, std::size_t, double); \
  extern template BasicMatrix<T> cholesky(const BasicSymMatrix<T>&, double);                        \
  extern template std::vector<T> cholesky_solve(const BasicMatrix<T>&, std::span<const T>);         \
  extern template std::vector<T> solve_spd(const BasicSymMatrix<T>&, std::span<const T>, double);
MFACCEL_LINALG_EXTERN(double)
MFACCEL_LINALG_EXTERN(extended)
#undef MFACCEL_LINALG_EXTERN

/// Square matrix whose nonzeros lie within `bandwidth` of the diagonal.
class BandedMatrix {
 public:
  BandedMatrix(std::size_t n, std::size_t bandwidth);
  /// Throws BandwidthViolation if a nonzero of `dense` lies outside the band.
  BandedMatrix(const Matrix& dense, std::size_t bandwidth);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t bandwidth() const noexcept { return b_; }

  [[nodiscard]] double get(std::size_t i, std::size_t j) const noexcept;
  /// Throws BandwidthViolation for (i,j) outside the band.
  void set(std::size_t i, std::size_t j, double v);

  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;

 private:
  friend std::vector<double> solve_banded(const BandedMatrix&, std::span<const double>);

  std::size_t n_;
  std::size_t b_;
  std::vector<double> band_;  // row i holds columns i-b .. i+b
};

/// Banded LU with partial pivoting restricted to the band.
std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> f);

double norm2(std::span<const double> x) noexcept;

}  // namespace mfaccel::linalg
