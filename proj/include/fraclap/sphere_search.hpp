#pragma once

#include <cstdint>
#include <vector>

#include "fraclap/basis.hpp"
#include "fraclap/problem.hpp"

namespace fraclap {

enum class SphereSense { maximize, minimize };

struct SphereSearchOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_iter = 5000;
  double grad_tol = 1e-8;
  // Extra starting points in z coordinates (need not be normalized).
  std::vector<Vector> starts;
  // Throw NoConvergence when the best start fails the first-order test.
  bool require_convergence = true;
};

struct SphereResult {
  double value = 0.0;  // |u|_q at the extremum
  Vector z;            // unit coordinates, u = B z
  Vector u;
  double rel_grad = 0.0;
  bool converged = false;
};

/// Extremum of |B z|_q over |z| = 1. When the columns of B are S-orthonormal
/// this is the extremum of |u|_q over the unit S-sphere of span(B).
///
/// Spaces of dimension <= 2 are scanned exhaustively on an angle grid before
/// polishing. Otherwise seeded random starts are improved by a nonlinear power
/// iteration (maximize) or Armijo gradient steps (minimize), then by
/// Riemannian Newton steps. The first-order test is the tangential gradient of
/// ln |u|_q, which is scale free.
SphereResult sphere_extremum(const Basis& basis, const Matrix& B, double q, SphereSense sense,
                             const SphereSearchOptions& options);

}  // namespace fraclap
