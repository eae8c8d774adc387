#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace fraclap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// The continuous problem on the interval (a, b) together with its
/// discretization parameters. Immutable once built by make_problem.
struct ProblemSpec {
  double s = 1.5;
  double sigma = 0.5;  // s - 1, the order of the inner Gagliardo seminorm
  double a = 0.0;
  double b = 1.0;
  int N = 32;  // uniform mesh intervals
  int quad_regular = 8;
  int quad_singular = 16;
  std::uint64_t seed = 0;

  int dim() const { return N - 3; }
  double h() const { return (b - a) / N; }
  double length() const { return b - a; }

  /// Stable fingerprint of every field, used to tie coefficient vectors
  /// to the discretization they were computed on.
  std::uint64_t id() const;

  bool operator==(const ProblemSpec&) const = default;
};

/// Validates and builds a spec: 1 < s < 2, b > a, N >= 8.
/// Throws OrderOutOfRange / MeshTooCoarse / BadParams.
ProblemSpec make_problem(double s, double a, double b, int N, std::uint64_t seed);

/// Same as make_problem but admits meshes down to N = 4 (dim >= 1). Only the
/// exhaustive grid oracle works at that size.
ProblemSpec make_coarse_problem(double s, double a, double b, int N, std::uint64_t seed);

/// Returns a copy with different quadrature orders (both >= 2).
ProblemSpec with_quadrature(ProblemSpec spec, int quad_regular, int quad_singular);

/// A member of the discrete trial space: spline coefficients plus the
/// fingerprint of the spec they belong to.
struct DiscreteFunction {
  Vector coeffs;
  std::uint64_t spec_id = 0;

  static DiscreteFunction zero(const ProblemSpec& spec);
  static DiscreteFunction from(const ProblemSpec& spec, Vector coeffs);
};

}  // namespace fraclap
