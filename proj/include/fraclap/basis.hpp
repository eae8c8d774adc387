#pragma once

#include <utility>

#include "fraclap/problem.hpp"

namespace fraclap {

/// Interior cubic B-splines on the uniform mesh a = x_0 < ... < x_N = b.
///
/// Function j lives on [x_j, x_{j+4}], j = 0 .. N-4, so every function is
/// supported inside [a, b] and it, its first and its second derivative vanish
/// at both endpoints. Extended by zero, u and Du vanish outside (a, b). The
/// boundary splines are dropped, so the basis is not a partition of unity.
class Basis {
 public:
  explicit Basis(const ProblemSpec& spec);

  const ProblemSpec& spec() const { return spec_; }
  int dim() const { return dim_; }
  int elements() const { return spec_.N; }
  double h() const { return h_; }
  double knot(int i) const { return spec_.a + i * h_; }

  /// Element containing x (clamped to [0, N-1]).
  int element_of(double x) const;
  /// Basis indices active on element e, inclusive; first > last if none.
  std::pair<int, int> active(int e) const;

  double value(int j, double x) const;
  double deriv(int j, double x) const;
  double deriv2(int j, double x) const;

  double eval(const Vector& coeffs, double x) const;
  double eval_deriv(const Vector& coeffs, double x) const;

  /// Piece k (0..3) of the reference spline, at local coordinate xi in [0, 1].
  /// Derivatives are with respect to the reference variable.
  static double piece_value(int k, double xi);
  static double piece_deriv(int k, double xi);
  static double piece_deriv2(int k, double xi);
  static double piece_deriv3(int k);

 private:
  // reference variable t = (x - x_j) / h in [0, 4)
  template <int Order>
  double reference(int j, double x) const;

  ProblemSpec spec_;
  int dim_;
  double h_;
};

Basis build_basis(const ProblemSpec& spec);

}  // namespace fraclap
