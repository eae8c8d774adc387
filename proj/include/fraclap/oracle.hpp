#pragma once

#include <limits>

#include "fraclap/energy.hpp"

namespace fraclap {

struct OracleResult {
  Vector coeffs;
  double energy = 0.0;
  long long evaluations = 0;
};

/// Exhaustive search of J over the grid {-w, -w + step, ..., w}^dim,
/// restricted to the closed S-ball of radius `ball` when given. Each of the
/// `levels` refinements repeats the exhaustive search with step / 10 over the
/// cell [c - step, c + step]^dim around the incumbent c. Throws DimTooLarge
/// if dim > 3, BadParams for a nonpositive width or step.
OracleResult oracle_global_min(const EnergyContext& ctx, double w, double step,
                               double ball = std::numeric_limits<double>::infinity(),
                               int levels = 0);

}  // namespace fraclap
