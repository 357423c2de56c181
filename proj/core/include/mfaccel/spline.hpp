#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mfaccel/integrate.hpp"

namespace mfaccel {

/// Clamped knot vector on [0, 1] for N_j + 1 basis functions of degree p:
/// p+1 zeros, N_j - p interior knots, p+1 ones. Interior knots are averages
/// of p consecutive sites i/N_j, so they are uniform with spacing 1/N_j and
/// satisfy Schoenberg-Whitney for interpolation at the sites with a bounded
/// condition number. For odd p they coincide with interior sites.
class KnotVector {
 public:
  /// Throws InvalidArgument unless 0 <= p <= N_j.
  KnotVector(int degree, std::size_t steps);

  [[nodiscard]] int degree() const noexcept { return degree_; }
  [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
  [[nodiscard]] std::size_t basis_count() const noexcept { return steps_ + 1; }
  [[nodiscard]] std::span<const double> knots() const noexcept { return knots_; }
  double operator[](std::size_t i) const noexcept { return knots_[i]; }

  /// Index s of the knot span [xi_s, xi_{s+1}) containing x, clamped to the
  /// last nonempty span at x = 1.
  [[nodiscard]] std::size_t find_span(double x) const noexcept;

  /// The p+1 basis values nonzero at x, for indices span-p .. span.
  void nonzero_basis(std::size_t span, double x, std::span<double> out) const noexcept;

 private:
  int degree_;
  std::size_t steps_;
  std::vector<double> knots_;
};

/// Cox-de Boor recursion for B_{i,p}(x), dropping 0/0 terms. At x = 1 the
/// last nonempty degree-0 span is treated as closed so the basis keeps its
/// left limit there.
double bspline_basis(const KnotVector& knots, std::size_t i, int p, double x);

class SplineCurve {
 public:
  SplineCurve(KnotVector knots, std::vector<double> coeffs, double horizon);

  [[nodiscard]] const KnotVector& knots() const noexcept { return knots_; }
  [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] int degree() const noexcept { return knots_.degree(); }

  /// sum_i alpha_i B_{i,p}(t/T). Throws OutOfDomain outside [0, T].
  [[nodiscard]] double eval(double t) const;
  double operator()(double t) const { return eval(t); }

 private:
  KnotVector knots_;
  std::vector<double> coeffs_;
  double horizon_;
};

/// Interpolates N_j + 1 equispaced samples on [0, T] at the sample sites;
/// endpoint coefficients are pinned to the endpoint samples.
SplineCurve fit(std::span<const double> data, int degree, double horizon);

/// Componentwise fit of a trajectory.
std::vector<SplineCurve> lift_trajectory(const Trajectory& traj, int degree);

}  // namespace mfaccel
