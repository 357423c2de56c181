#include "mfaccel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mfaccel/error.hpp"

namespace mfaccel::linalg {

template <class T>
BasicMatrix<T>::BasicMatrix(std::initializer_list<std::initializer_list<T>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

template <class T>
std::vector<T> BasicMatrix<T>::apply(std::span<const std::type_identity_t<T>> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::InvalidArgument, "matrix-vector size mismatch");
  std::vector<T> y(rows_, T(0));
  for (std::size_t i = 0; i < rows_; ++i) {
    T s = 0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

template <class T>
BasicSymMatrix<T>::BasicSymMatrix(std::initializer_list<std::initializer_list<T>> rows) : m_(rows) {
  if (m_.rows() != m_.cols()) throw Error(ErrorCode::InvalidArgument, "SymMatrix must be square");
}

template <class T>
BasicSymMatrix<T>::BasicSymMatrix(BasicMatrix<T> m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw Error(ErrorCode::InvalidArgument, "SymMatrix must be square");
}

template <class T>
T BasicSymMatrix<T>::max_diagonal() const noexcept {
  T d = 0;
  for (std::size_t i = 0; i < size(); ++i)
    if (m_(i, i) > d) d = m_(i, i);
  return d;
}

template <class T>
BasicSymMatrix<T> BasicSymMatrix<T>::leading(std::size_t k) const {
  if (k > size()) throw Error(ErrorCode::InvalidArgument, "leading block larger than matrix");
  BasicSymMatrix out(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = m_(i, j);
  return out;
}

template <class T>
void BasicSymMatrix<T>::check_symmetric() const {
  T scale = 0;
  for (T v : m_.data()) {
    if (!num::isfinite(v)) throw Error(ErrorCode::NonSymmetric, "non-finite matrix entry");
    if (num::abs(v) > scale) scale = num::abs(v);
  }
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (num::abs(m_(i, j) - m_(j, i)) > T(1e-12) * scale)
        throw Error(ErrorCode::NonSymmetric,
                    "entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
}

template <class T>
PivotedCholeskyResult<T> pivoted_cholesky(const BasicSymMatrix<T>& g, std::size_t n_max, double tol) {
  g.check_symmetric();
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be nonnegative");

  const std::size_t n = g.size();
  const std::size_t steps = std::min(n_max, n);
  std::vector<T> d(n);
  T max_d0 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = g(i, i);
    if (d[i] > max_d0) max_d0 = d[i];
  }
  const T neg_floor = T(-1e-8) * max_d0;
  for (T v : d)
    if (v < neg_floor) throw Error(ErrorCode::NegativeDiagonal, "matrix has a negative diagonal");

  PivotedCholeskyResult<T> out;
  BasicMatrix<T> l(n, steps);
  std::vector<char> taken(n, 0);
  const T stop_at = T(tol) * max_d0;

  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!taken[i] && (piv == n || d[i] > d[piv])) piv = i;
    if (piv == n || d[piv] <= stop_at || d[piv] <= 0) break;

    taken[piv] = 1;
    out.pivots.push_back(piv);
    out.residual_diag.push_back(d[piv]);
    const T lpp = num::sqrt(d[piv]);
    l(piv, s) = lpp;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      T v = g(i, piv);
      for (std::size_t t = 0; t < s; ++t) v -= l(i, t) * l(piv, t);
      v /= lpp;
      l(i, s) = v;
      d[i] -= v * v;
      if (d[i] < neg_floor)
        throw Error(ErrorCode::NegativeDiagonal, "residual diagonal went negative (indefinite matrix)");
    }
  }

  const std::size_t k = out.pivots.size();
  out.factor = BasicMatrix<T>(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) out.factor(i, t) = l(i, t);
  for (std::size_t i = 0; i < n; ++i)
    if (!taken[i] && d[i] > out.max_remaining) out.max_remaining = d[i];
  return out;
}

template <class T>
BasicMatrix<T> cholesky(const BasicSymMatrix<T>& g, double rel_floor) {
  g.check_symmetric();
  const std::size_t n = g.size();
  const T floor = T(rel_floor) * g.max_diagonal();
  BasicMatrix<T> l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    T d = g(j, j);
    for (std::size_t t = 0; t < j; ++t) d -= l(j, t) * l(j, t);
    if (!(d > floor) || !(d > 0))
      throw Error(ErrorCode::SingularSystem, "Cholesky pivot " + std::to_string(j) + " is not positive");
    const T ljj = num::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      T v = g(i, j);
      for (std::size_t t = 0; t < j; ++t) v -= l(i, t) * l(j, t);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

template <class T>
std::vector<T> cholesky_solve(const BasicMatrix<T>& lower, std::span<const std::type_identity_t<T>> f) {
  const std::size_t n = lower.rows();
  if (f.size() != n) throw Error(ErrorCode::InvalidArgument, "right-hand side size mismatch");
  std::vector<T> y(f.begin(), f.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < i; ++t) y[i] -= lower(i, t) * y[t];
    y[i] /= lower(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t t = ii + 1; t < n; ++t) y[ii] -= lower(t, ii) * y[t];
    y[ii] /= lower(ii, ii);
  }
  return y;
}

template <class T>
std::vector<T> solve_spd(const BasicSymMatrix<T>& g, std::span<const std::type_identity_t<T>> f,
                         double rel_floor) {
  if (f.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "right-hand side size mismatch");
  return cholesky_solve(cholesky(g, rel_floor), f);
}

#define MFACCEL_LINALG_INSTANTIATE(T)                                                        \
  template class BasicMatrix<T>;                                                             \
  template class BasicSymMatrix<T>;                                                          \
  template PivotedCholeskyResult<T> pivoted_cholesky(const BasicSymMatrix<T>&, std::size_t, double); \
  template BasicMatrix<T> cholesky(const BasicSymMatrix<T>&, double);                        \
  template std::vector<T> cholesky_solve(const BasicMatrix<T>&, std::span<const T>);         \
  template std::vector<T> solve_spd(const BasicSymMatrix<T>&, std::span<const T>, double);
MFACCEL_LINALG_INSTANTIATE(double)
MFACCEL_LINALG_INSTANTIATE(extended)
#undef MFACCEL_LINALG_INSTANTIATE

BandedMatrix::BandedMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), b_(bandwidth), band_(n * (2 * bandwidth + 1), 0.0) {}

BandedMatrix::BandedMatrix(const Matrix& dense, std::size_t bandwidth)
    : BandedMatrix(dense.rows(), bandwidth) {
  if (dense.rows() != dense.cols()) throw Error(ErrorCode::InvalidArgument, "banded matrix must be square");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (dense(i, j) != 0.0) set(i, j, dense(i, j));
}

double BandedMatrix::get(std::size_t i, std::size_t j) const noexcept {
  if (i >= n_ || j >= n_ || j + b_ < i || j > i + b_) return 0.0;
  return band_[i * (2 * b_ + 1) + (j + b_ - i)];
}

void BandedMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_ || j + b_ < i || j > i + b_)
    throw Error(ErrorCode::BandwidthViolation,
                "entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside bandwidth " +
                    std::to_string(b_));
  band_[i * (2 * b_ + 1) + (j + b_ - i)] = v;
}

std::vector<double> BandedMatrix::apply(std::span<const double> x) const {
  if (x.size() != n_) throw Error(ErrorCode::InvalidArgument, "matrix-vector size mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > b_ ? i - b_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + b_);
    for (std::size_t j = lo; j <= hi; ++j) y[i] += get(i, j) * x[j];
  }
  return y;
}

std::vector<double> solve_banded(const BandedMatrix& a, std::span<const double> f) {
  const std::size_t n = a.n_;
  const std::size_t b = a.b_;
  if (f.size() != n) throw Error(ErrorCode::InvalidArgument, "right-hand side size mismatch");
  if (n == 0) return {};

  // Working rows span columns i-b .. i+2b to hold fill-in from row swaps.
  const std::size_t width = 3 * b + 1;
  std::vector<double> w(n * width, 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return w[i * width + (j + b - i)]; };

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > b ? i - b : 0;
    const std::size_t hi = std::min(n - 1, i + b);
    for (std::size_t j = lo; j <= hi; ++j) {
      at(i, j) = a.get(i, j);
      scale = std::max(scale, std::abs(at(i, j)));
    }
  }
  std::vector<double> x(f.begin(), f.end());
  const double tiny = 1e-14 * scale;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last_row = std::min(n - 1, k + b);
    const std::size_t last_col = std::min(n - 1, k + 2 * b);
    std::size_t p = k;
    for (std::size_t i = k + 1; i <= last_row; ++i)
      if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
    if (!(std::abs(at(p, k)) > tiny))
      throw Error(ErrorCode::SingularSystem, "zero pivot in banded LU at column " + std::to_string(k));
    if (p != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(at(k, j), at(p, j));
      std::swap(x[k], x[p]);
    }
    const double pivot = at(k, k);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double m = at(i, k) / pivot;
      if (m == 0.0) continue;
      at(i, k) = 0.0;
      for (std::size_t j = k + 1; j <= last_col; ++j) at(i, j) -= m * at(k, j);
      x[i] -= m * x[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    const std::size_t last_col = std::min(n - 1, i + 2 * b);
    double s = x[i];
    for (std::size_t j = i + 1; j <= last_col; ++j) s -= at(i, j) * x[j];
    x[i] = s / at(i, i);
  }
  return x;
}

double norm2(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace mfaccel::linalg
