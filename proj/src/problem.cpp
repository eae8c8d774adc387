#include "fraclap/problem.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

void check_common(double s, double a, double b) {
  if (!(s > 1.0 && s < 2.0)) {
    throw Error(Errc::OrderOutOfRange, "s = " + std::to_string(s) + " is not in (1, 2)");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
    throw Error(Errc::BadParams, "interval endpoints must satisfy b > a");
  }
}

ProblemSpec build(double s, double a, double b, int N, std::uint64_t seed) {
  ProblemSpec spec;
  spec.s = s;
  spec.sigma = s - 1.0;
  spec.a = a;
  spec.b = b;
  spec.N = N;
  spec.seed = seed;
  return spec;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  // FNV-1a over the 8 bytes of v
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t ProblemSpec::id() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = mix(h, std::bit_cast<std::uint64_t>(s));
  h = mix(h, std::bit_cast<std::uint64_t>(a));
  h = mix(h, std::bit_cast<std::uint64_t>(b));
  h = mix(h, static_cast<std::uint64_t>(N));
  h = mix(h, static_cast<std::uint64_t>(quad_regular));
  h = mix(h, static_cast<std::uint64_t>(quad_singular));
  return mix(h, seed);
}

ProblemSpec make_problem(double s, double a, double b, int N, std::uint64_t seed) {
  check_common(s, a, b);
  if (N < 8) {
    throw Error(Errc::MeshTooCoarse, "N = " + std::to_string(N) + " < 8");
  }
  return build(s, a, b, N, seed);
}

ProblemSpec make_coarse_problem(double s, double a, double b, int N, std::uint64_t seed) {
  check_common(s, a, b);
  if (N < 4) {
    throw Error(Errc::MeshTooCoarse, "N = " + std::to_string(N) + " < 4 leaves no basis function");
  }
  return build(s, a, b, N, seed);
}

ProblemSpec with_quadrature(ProblemSpec spec, int quad_regular, int quad_singular) {
  if (quad_regular < 2 || quad_singular < 2) {
    throw Error(Errc::BadParams, "quadrature orders must be >= 2");
  }
  spec.quad_regular = quad_regular;
  spec.quad_singular = quad_singular;
  return spec;
}

DiscreteFunction DiscreteFunction::zero(const ProblemSpec& spec) {
  return {Vector::Zero(spec.dim()), spec.id()};
}

DiscreteFunction DiscreteFunction::from(const ProblemSpec& spec, Vector coeffs) {
  if (coeffs.size() != spec.dim()) {
    throw Error(Errc::BadParams, "coefficient vector has length " + std::to_string(coeffs.size()) +
                                     ", expected " + std::to_string(spec.dim()));
  }
  return {std::move(coeffs), spec.id()};
}

}  // namespace fraclap
