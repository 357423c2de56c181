#include "mfaccel/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mfaccel/error.hpp"
#include "mfaccel/linalg.hpp"

namespace mfaccel {

KnotVector::KnotVector(int degree, std::size_t steps) : degree_(degree), steps_(steps) {
  if (degree < 0 || static_cast<std::size_t>(degree) > steps)
    throw Error(ErrorCode::InvalidArgument, "spline degree " + std::to_string(degree) + " needs more than " +
                                                std::to_string(steps) + " intervals");
  if (degree > 15) throw Error(ErrorCode::InvalidArgument, "spline degree above 15 is not supported");
  const auto p = static_cast<std::size_t>(degree);
  const std::size_t interior = steps - p;
  knots_.reserve(steps + p + 2);
  knots_.insert(knots_.end(), p + 1, 0.0);
  // Averages of p consecutive sample sites i/N: uniform with spacing 1/N.
  const double shift = 0.5 * static_cast<double>(degree - 1);
  const auto n = static_cast<double>(steps);
  for (std::size_t i = 1; i <= interior; ++i) knots_.push_back((static_cast<double>(i) + shift) / n);
  knots_.insert(knots_.end(), p + 1, 1.0);
}

std::size_t KnotVector::find_span(double x) const noexcept {
  const auto p = static_cast<std::size_t>(degree_);
  const std::size_t last = steps_;  // highest basis index
  if (x >= knots_[last + 1]) return last;
  if (x <= knots_[p]) return p;
  // knots_[lo] <= x < knots_[hi]
  std::size_t lo = p;
  std::size_t hi = last + 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (x < knots_[mid]) hi = mid;
    else lo = mid;
  }
  return lo;
}

void KnotVector::nonzero_basis(std::size_t span, double x, std::span<double> out) const noexcept {
  // Piegl & Tiller, "The NURBS Book", algorithm A2.2.
  const auto p = static_cast<std::size_t>(degree_);
  double left[16];
  double right[16];
  out[0] = 1.0;
  for (std::size_t j = 1; j <= p; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (std::size_t r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

namespace {

double basis_recursive(std::span<const double> xi, std::size_t i, int p, double x, std::size_t closed_span) {
  if (p == 0) {
    if (xi[i] <= x && x < xi[i + 1]) return 1.0;
    return (i == closed_span && x == xi[i + 1]) ? 1.0 : 0.0;
  }
  const auto up = static_cast<std::size_t>(p);
  double value = 0.0;
  const double d1 = xi[i + up] - xi[i];
  if (d1 != 0.0) value += (x - xi[i]) / d1 * basis_recursive(xi, i, p - 1, x, closed_span);
  const double d2 = xi[i + up + 1] - xi[i + 1];
  if (d2 != 0.0) value += (xi[i + up + 1] - x) / d2 * basis_recursive(xi, i + 1, p - 1, x, closed_span);
  return value;
}

}  // namespace

double bspline_basis(const KnotVector& knots, std::size_t i, int p, double x) {
  const auto xi = knots.knots();
  if (p < 0 || i + static_cast<std::size_t>(p) + 1 >= xi.size())
    throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  // Last nonempty span [xi_s, xi_{s+1}) with xi_{s+1} = 1.
  std::size_t closed = xi.size() - 2;
  while (closed > 0 && xi[closed] == xi[closed + 1]) --closed;
  return basis_recursive(xi, i, p, x, closed);
}

SplineCurve::SplineCurve(KnotVector knots, std::vector<double> coeffs, double horizon)
    : knots_(std::move(knots)), coeffs_(std::move(coeffs)), horizon_(horizon) {
  if (coeffs_.size() != knots_.basis_count())
    throw Error(ErrorCode::InvalidArgument, "coefficient count does not match the knot vector");
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
}

double SplineCurve::eval(double t) const {
  const double slack = 1e-12 * horizon_;
  if (!(t >= -slack && t <= horizon_ + slack))
    throw Error(ErrorCode::OutOfDomain, "t=" + std::to_string(t) + " outside [0, " + std::to_string(horizon_) + "]");
  const double x = std::clamp(t / horizon_, 0.0, 1.0);
  const std::size_t span = knots_.find_span(x);
  std::array<double, 16> basis{};
  knots_.nonzero_basis(span, x, basis);
  const auto p = static_cast<std::size_t>(knots_.degree());
  double s = 0.0;
  for (std::size_t r = 0; r <= p; ++r) s += coeffs_[span - p + r] * basis[r];
  return s;
}

SplineCurve fit(std::span<const double> data, int degree, double horizon) {
  if (data.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two samples");
  const std::size_t steps = data.size() - 1;
  if (degree < 0 || static_cast<std::size_t>(degree) >= data.size())
    throw Error(ErrorCode::InvalidArgument, "spline degree must be below the number of samples");

  KnotVector knots(degree, steps);
  const auto p = static_cast<std::size_t>(degree);
  linalg::BandedMatrix a(steps + 1, p + 1);
  std::vector<double> basis(p + 1);
  a.set(0, 0, 1.0);
  a.set(steps, steps, 1.0);
  for (std::size_t i = 1; i < steps; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(steps);
    const std::size_t span = knots.find_span(x);
    knots.nonzero_basis(span, x, basis);
    for (std::size_t r = 0; r <= p; ++r)
      if (basis[r] != 0.0) a.set(i, span - p + r, basis[r]);
  }
  std::vector<double> coeffs;
  try {
    coeffs = linalg::solve_banded(a, data);
  } catch (const Error& e) {
    throw Error(ErrorCode::SingularSystem, std::string("collocation system is singular: ") + e.what());
  }
  return SplineCurve(std::move(knots), std::move(coeffs), horizon);
}

std::vector<SplineCurve> lift_trajectory(const Trajectory& traj, int degree) {
  std::vector<SplineCurve> out;
  out.reserve(traj.state_dim());
  for (std::size_t m = 0; m < traj.state_dim(); ++m) out.push_back(fit(traj.component(m), degree, traj.grid().horizon()));
  return out;
}

}  // namespace mfaccel
