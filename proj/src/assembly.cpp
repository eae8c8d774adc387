#include "fraclap/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fraclap/error.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/sphere_search.hpp"

namespace fraclap {

namespace {

// Quadrature point of an element pair. The meaning of (a, b) depends on the
// pair type (see the *_nodes builders); `dist` is |x - y| computed without
// cancellation.
struct PairNode {
  double a;
  double b;
  double weight;
  double dist;
};

enum class PairKind { identical, touching, separated };

// a = local y, b = r = x - y in reference units. The x > y half is doubled.
std::vector<PairNode> identical_nodes(double h, int order, double sigma) {
  const auto radial = graded_gauss(1.0, 2 * order, 1.0 - 2.0 * sigma);
  const auto& tau = gauss_legendre(2 * order);
  std::vector<PairNode> nodes;
  nodes.reserve(radial.size() * tau.size());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes[i];
    for (std::size_t k = 0; k < tau.size(); ++k) {
      const double y = (1.0 - r) * tau.nodes[k];
      nodes.push_back({y, r, 2.0 * radial.weights[i] * tau.weights[k] * (1.0 - r) * h * h, h * r});
    }
  }
  return nodes;
}

// a = u, distance of x below the shared knot; b = v, distance of y above it.
std::vector<PairNode> touching_nodes(double h, int order, double sigma) {
  const auto radial = graded_gauss(1.0, order, 2.0 - 2.0 * sigma);
  const auto& tau = gauss_legendre(order);
  std::vector<PairNode> nodes;
  nodes.reserve(2 * radial.size() * tau.size());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double rho = radial.nodes[i];
    for (std::size_t k = 0; k < tau.size(); ++k) {
      const double t = tau.nodes[k];
      const double w = radial.weights[i] * tau.weights[k] * rho * h * h;
      const double dist = h * rho * (1.0 + t);
      nodes.push_back({rho, rho * t, w, dist});
      nodes.push_back({rho * t, rho, w, dist});
    }
  }
  return nodes;
}

// a = local x, b = local y.
std::vector<PairNode> separated_nodes(double h, int order, int gap) {
  const auto& g = gauss_legendre(order);
  std::vector<PairNode> nodes;
  nodes.reserve(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double dist = h * std::abs(gap + g.nodes[k] - g.nodes[i]);
      nodes.push_back({g.nodes[i], g.nodes[k], g.weights[i] * g.weights[k] * h * h, dist});
    }
  }
  return nodes;
}

bool valid_piece(int k) { return k >= 0 && k <= 3; }

// Derivative of basis j at reference point xi of element e (0 if inactive).
double local_deriv(int e, int j, double xi, double h) {
  const int k = e - j;
  if (!valid_piece(k)) return 0.0;
  return Basis::piece_deriv(k, xi) / h;
}

// Dphi_j(x) - Dphi_j(y). Dphi is piecewise quadratic, so for nearby x, y the
// difference is expanded exactly instead of subtracting two O(1) values.
double deriv_difference(PairKind kind, int e, int f, int j, const PairNode& n, double h) {
  switch (kind) {
    case PairKind::identical: {
      const int k = e - j;
      if (!valid_piece(k)) return 0.0;
      const double r = n.b;
      return (r * Basis::piece_deriv2(k, n.a) + 0.5 * r * r * Basis::piece_deriv3(k)) / h;
    }
    case PairKind::touching: {
      const int kl = e - j;
      const int kr = f - j;
      const double d2 = valid_piece(kl) ? Basis::piece_deriv2(kl, 1.0)
                                        : (valid_piece(kr) ? Basis::piece_deriv2(kr, 0.0) : 0.0);
      const double cl = valid_piece(kl) ? Basis::piece_deriv3(kl) : 0.0;
      const double cr = valid_piece(kr) ? Basis::piece_deriv3(kr) : 0.0;
      const double u = n.a, v = n.b;
      return (-(u + v) * d2 + 0.5 * (u * u * cl - v * v * cr)) / h;
    }
    case PairKind::separated:
      return local_deriv(e, j, n.a, h) - local_deriv(f, j, n.b, h);
  }
  return 0.0;
}

// Accumulates factor * sum_nodes w |x-y|^{-1-2 sigma} d d^T into S, where
// d_i = Dphi_i(x) - Dphi_i(y), over the basis functions active on e or f.
void accumulate_pair(const Basis& basis, PairKind kind, int e, int f,
                     const std::vector<PairNode>& nodes, double exponent, double factor, Matrix& S) {
  const int dim = basis.dim();
  const double h = basis.h();
  std::array<int, 8> idx{};
  int n = 0;
  for (int j = std::max(0, e - 3); j <= std::min(e, dim - 1); ++j) idx[n++] = j;
  for (int j = std::max(0, f - 3); j <= std::min(f, dim - 1); ++j) {
    if (std::find(idx.begin(), idx.begin() + n, j) == idx.begin() + n) idx[n++] = j;
  }
  if (n == 0) return;

  Eigen::Matrix<double, 8, 8> local = Eigen::Matrix<double, 8, 8>::Zero();
  Eigen::Matrix<double, 8, 1> d;
  for (const auto& node : nodes) {
    const double kernel = node.weight * std::pow(node.dist, -exponent);
    for (int a = 0; a < n; ++a) d[a] = deriv_difference(kind, e, f, idx[a], node, h);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b <= a; ++b) local(a, b) += kernel * d[a] * d[b];
    }
  }
  if (kind != PairKind::separated && !local.topLeftCorner(n, n).allFinite()) {
    throw Error(Errc::QuadratureBreakdown,
                "non-finite stiffness contribution on element " + std::to_string(e));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b <= a; ++b) {
      const double v = factor * local(a, b);
      S(idx[a], idx[b]) += v;
      if (a != b) S(idx[b], idx[a]) += v;
    }
  }
}

void assemble_tail(const ProblemSpec& spec, const Basis& basis, Matrix& S) {
  const double h = basis.h();
  const double power = 4.0 - 2.0 * spec.sigma;  // Dphi^2 w ~ (x-a)^{4-2 sigma} at the ends
  for (int e = 0; e < spec.N; ++e) {
    QuadratureRule rule;
    if (e == 0 || e == spec.N - 1) {
      rule = graded_gauss(1.0, spec.quad_singular, power);
      if (e == spec.N - 1) {
        for (auto& x : rule.nodes) x = 1.0 - x;
      }
    } else {
      rule = gauss_legendre(spec.quad_regular);
    }
    const auto [first, last] = basis.active(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      // distances to the endpoints computed from the local coordinate
      const double da = (e + xi) * h;
      const double db = (spec.N - e - xi) * h;
      const double w = (std::pow(da, -2.0 * spec.sigma) + std::pow(db, -2.0 * spec.sigma)) /
                       (2.0 * spec.sigma);
      const double weight = 2.0 * w * rule.weights[q] * h;
      for (int i = first; i <= last; ++i) {
        const double di = local_deriv(e, i, xi, h);
        for (int j = first; j <= last; ++j) {
          S(i, j) += weight * di * local_deriv(e, j, xi, h);
        }
      }
    }
  }
}

void assemble_mass(const ProblemSpec& spec, const Basis& basis, Matrix& M, Matrix& G) {
  const auto& rule = gauss_legendre(std::max(spec.quad_regular, 4));
  const double h = basis.h();
  for (int e = 0; e < spec.N; ++e) {
    const auto [first, last] = basis.active(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double w = rule.weights[q] * h;
      for (int i = first; i <= last; ++i) {
        const double vi = Basis::piece_value(e - i, xi);
        const double di = Basis::piece_deriv(e - i, xi) / h;
        for (int j = first; j <= last; ++j) {
          M(i, j) += w * vi * Basis::piece_value(e - j, xi);
          G(i, j) += w * di * Basis::piece_deriv(e - j, xi) / h;
        }
      }
    }
  }
}

// Calls fn(e, xi, weight, u(x)) for every element Gauss point.
template <typename Fn>
void for_each_point(const Basis& basis, const Vector& u, Fn&& fn) {
  const auto& rule = gauss_legendre(basis.spec().quad_regular);
  const double h = basis.h();
  for (int e = 0; e < basis.elements(); ++e) {
    const auto [first, last] = basis.active(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      double value = 0.0;
      for (int j = first; j <= last; ++j) value += u[j] * Basis::piece_value(e - j, xi);
      fn(e, xi, rule.weights[q] * h, value);
    }
  }
}

}  // namespace

double tail_weight(const ProblemSpec& spec, double x) {
  if (!(x > spec.a && x < spec.b)) {
    throw Error(Errc::OutsideDomain, "tail_weight needs a < x < b");
  }
  return (std::pow(x - spec.a, -2.0 * spec.sigma) + std::pow(spec.b - x, -2.0 * spec.sigma)) /
         (2.0 * spec.sigma);
}

AssembledSystem assemble(const ProblemSpec& spec, const Basis& basis) {
  const int dim = basis.dim();
  const double h = basis.h();
  const double exponent = 1.0 + 2.0 * spec.sigma;

  AssembledSystem sys;
  sys.spec = spec;
  sys.quad_regular = spec.quad_regular;
  sys.quad_singular = spec.quad_singular;
  sys.S = Matrix::Zero(dim, dim);
  sys.M = Matrix::Zero(dim, dim);
  sys.G = Matrix::Zero(dim, dim);

  const auto same = identical_nodes(h, spec.quad_singular, spec.sigma);
  const auto touch = touching_nodes(h, spec.quad_singular, spec.sigma);
  std::vector<std::vector<PairNode>> separated(spec.N);
  for (int gap = 2; gap < spec.N; ++gap) separated[gap] = separated_nodes(h, spec.quad_regular, gap);

  // Omega x Omega: (e, f) and (f, e) contribute equally
  for (int e = 0; e < spec.N; ++e) {
    accumulate_pair(basis, PairKind::identical, e, e, same, exponent, 1.0, sys.S);
    if (e + 1 < spec.N) {
      accumulate_pair(basis, PairKind::touching, e, e + 1, touch, exponent, 2.0, sys.S);
    }
    for (int f = e + 2; f < spec.N; ++f) {
      accumulate_pair(basis, PairKind::separated, e, f, separated[f - e], exponent, 2.0, sys.S);
    }
  }
  assemble_tail(spec, basis, sys.S);
  assemble_mass(spec, basis, sys.M, sys.G);

  // exact symmetry; each entry is already symmetric up to summation order
  sys.S = 0.5 * (sys.S + sys.S.transpose()).eval();
  sys.M = 0.5 * (sys.M + sys.M.transpose()).eval();
  sys.G = 0.5 * (sys.G + sys.G.transpose()).eval();
  return sys;
}

double h_norm(const AssembledSystem& sys, const Vector& u) {
  return std::sqrt(std::max(0.0, u.dot(sys.S * u)));
}

double l2_norm(const AssembledSystem& sys, const Vector& u) {
  return std::sqrt(std::max(0.0, u.dot(sys.M * u)));
}

double full_norm(const AssembledSystem& sys, const Vector& u) {
  return std::sqrt(std::max(0.0, u.dot(sys.M * u) + 2.0 * u.dot(sys.G * u) + u.dot(sys.S * u)));
}

double lq_norm(const Basis& basis, const Vector& u, double q) {
  double sum = 0.0;
  for_each_point(basis, u, [&](int, double, double w, double value) {
    sum += w * std::pow(std::abs(value), q);
  });
  return std::pow(sum, 1.0 / q);
}

Vector load_vector(const Basis& basis, const Forcing& forcing, const Vector& u) {
  Vector b = Vector::Zero(basis.dim());
  for_each_point(basis, u, [&](int e, double xi, double w, double value) {
    const double x = basis.knot(e) + xi * basis.h();
    const double fv = forcing.f(x, value);
    if (!std::isfinite(fv)) {
      throw Error(Errc::NonFiniteIntegrand, "f is not finite at x = " + std::to_string(x));
    }
    const auto [first, last] = basis.active(e);
    for (int j = first; j <= last; ++j) b[j] += w * fv * Basis::piece_value(e - j, xi);
  });
  return b;
}

Vector load_vector(const Basis& basis, const Nonlinearity& nl, const Vector& u, double lambda,
                   double mu) {
  return load_vector(basis, Forcing::of(nl, lambda, mu, nl.params().p), u);
}

double potential_integral(const Basis& basis, const Forcing& forcing, const Vector& u) {
  double sum = 0.0;
  for_each_point(basis, u, [&](int e, double xi, double w, double value) {
    const double x = basis.knot(e) + xi * basis.h();
    const double Fv = forcing.F(x, value);
    if (!std::isfinite(Fv)) {
      throw Error(Errc::NonFiniteIntegrand, "F is not finite at x = " + std::to_string(x));
    }
    sum += w * Fv;
  });
  return sum;
}

Matrix derivative_mass(const Basis& basis, const Forcing& forcing, const Vector& u, bool* clamped) {
  Matrix Mf = Matrix::Zero(basis.dim(), basis.dim());
  bool any_clamped = false;
  for_each_point(basis, u, [&](int e, double xi, double w, double value) {
    const double x = basis.knot(e) + xi * basis.h();
    const double dv = forcing.ft(x, value);
    if (!std::isfinite(dv)) {
      throw Error(Errc::NonFiniteIntegrand, "d_t f is not finite at x = " + std::to_string(x));
    }
    any_clamped = any_clamped || forcing.ft_clamped(value);
    const auto [first, last] = basis.active(e);
    for (int i = first; i <= last; ++i) {
      const double vi = Basis::piece_value(e - i, xi);
      for (int j = first; j <= last; ++j) Mf(i, j) += w * dv * vi * Basis::piece_value(e - j, xi);
    }
  });
  if (clamped) *clamped = any_clamped;
  return Mf;
}

std::pair<double, Vector> lq_power_gradient(const Basis& basis, const Vector& u, double q) {
  Vector grad = Vector::Zero(basis.dim());
  double sum = 0.0;
  for_each_point(basis, u, [&](int e, double xi, double w, double value) {
    const double a = std::abs(value);
    sum += w * std::pow(a, q);
    const double dv = q * std::copysign(std::pow(a, q - 1.0), value);
    const auto [first, last] = basis.active(e);
    for (int j = first; j <= last; ++j) grad[j] += w * dv * Basis::piece_value(e - j, xi);
  });
  return {sum, grad};
}

Vector project(const AssembledSystem& sys, const Basis& basis,
               const std::function<double(double)>& fn) {
  Vector rhs = Vector::Zero(basis.dim());
  const auto& rule = gauss_legendre(std::max(2 * basis.spec().quad_regular, 8));
  const double h = basis.h();
  for (int e = 0; e < basis.elements(); ++e) {
    const auto [first, last] = basis.active(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double xi = rule.nodes[q];
      const double fv = fn(basis.knot(e) + xi * h);
      for (int j = first; j <= last; ++j) {
        rhs[j] += rule.weights[q] * h * fv * Basis::piece_value(e - j, xi);
      }
    }
  }
  return sys.M.llt().solve(rhs);
}

double estimate_embedding_constant(const AssembledSystem& sys, const Basis& basis, double q,
                                   int restarts) {
  if (q < 1.0) throw Error(Errc::BadParams, "embedding constant needs q >= 1");
  if (restarts < 4) throw Error(Errc::BadParams, "embedding constant needs restarts >= 4");
  Eigen::LLT<Matrix> llt(sys.S);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::FactorizationFailure, "stiffness matrix is not positive definite");
  }
  // u = L^{-T} z has ||u|| = |z|
  const Matrix B = llt.matrixU().solve(Matrix::Identity(sys.dim(), sys.dim()));
  SphereSearchOptions opts;
  opts.restarts = restarts;
  opts.seed = sys.spec.seed;
  return sphere_extremum(basis, B, q, SphereSense::maximize, opts).value;
}

}  // namespace fraclap
