#pragma once

#include <vector>

namespace fraclap {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [0, 1]. Cached per n; thread-safe.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [lo, hi].
QuadratureRule gauss_on(double lo, double hi, int n);

/// Composite Gauss rule on [0, length] with cells graded geometrically towards
/// 0 (ratio `grading`), for integrands behaving like r^alpha with alpha > -1.
/// Enough levels are generated that the innermost cell carries a relative
/// share below ~1e-17 of the integral.
QuadratureRule graded_gauss(double length, int n, double alpha, double grading = 0.15);

}  // namespace fraclap
