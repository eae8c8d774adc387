#include "fraclap/oracle.hpp"

#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

// u at every element Gauss point, as a dense points x dim table.
struct PointTable {
  Matrix V;
  std::vector<double> x;
  std::vector<double> w;
};

PointTable point_table(const Basis& basis, int order) {
  const auto& rule = gauss_legendre(order);
  PointTable t;
  const int npts = basis.elements() * static_cast<int>(rule.size());
  t.V = Matrix::Zero(npts, basis.dim());
  int row = 0;
  for (int e = 0; e < basis.elements(); ++e) {
    const auto [first, last] = basis.active(e);
    for (std::size_t g = 0; g < rule.size(); ++g, ++row) {
      const double x = basis.knot(e) + rule.nodes[g] * basis.h();
      t.x.push_back(x);
      t.w.push_back(rule.weights[g] * basis.h());
      for (int j = first; j <= last; ++j) t.V(row, j) = basis.value(j, x);
    }
  }
  return t;
}

}  // namespace

OracleResult oracle_global_min(const EnergyContext& ctx, double w, double step, double ball, int levels) {
  const int dim = ctx.dim();
  if (dim > 3) throw Error(Errc::DimTooLarge, "grid oracle needs dim <= 3, got " + std::to_string(dim));
  if (!(w > 0.0) || !(step > 0.0) || levels < 0) throw Error(Errc::BadParams, "oracle needs w > 0, step > 0, levels >= 0");
  const Matrix& S = ctx.sys().S;
  const auto table = point_table(ctx.basis(), ctx.sys().quad_regular);
  const auto& forcing = ctx.forcing();
  const int npts = static_cast<int>(table.x.size());

  OracleResult best;
  best.coeffs = Vector::Zero(dim);
  best.energy = INFINITY;
  Vector u(npts);
  auto energy = [&](const Vector& c) {
    u.noalias() = table.V * c;
    double pot = 0.0;
    for (int i = 0; i < npts; ++i) pot += table.w[i] * forcing.F(table.x[i], u[i]);
    return 0.5 * c.dot(S * c) - pot;
  };

  Vector center = Vector::Zero(dim);
  double half = w;
  for (int level = 0; level <= levels; ++level, half = step, step /= 10.0) {
    const int n = static_cast<int>(std::llround(2.0 * half / step)) + 1;
    const Vector lo = center.array() - half;
    std::vector<int> idx(dim, 0);
    Vector c(dim);
    bool done = false;
    while (!done) {
      for (int d = 0; d < dim; ++d) c[d] = lo[d] + idx[d] * step;
      if (!(c.dot(S * c) > ball * ball)) {
        const double J = energy(c);
        ++best.evaluations;
        if (J < best.energy) {
          best.energy = J;
          best.coeffs = c;
        }
      }
      int d = 0;
      while (d < dim && ++idx[d] == n) idx[d++] = 0;
      done = d == dim;
    }
    center = best.coeffs;
  }
  return best;
}

}  // namespace fraclap
