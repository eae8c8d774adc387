#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

namespace {

// Redistributes the points strictly between i0 and i1 at equal H-arclength
// along the polygon through path[i0..i1].
void equidistribute(const Matrix& S, std::vector<Vector>& path, int i0, int i1) {
  const int n = i1 - i0;
  if (n < 2) return;
  std::vector<double> arc(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) {
    const Vector d = path[i0 + j] - path[i0 + j - 1];
    arc[j] = arc[j - 1] + std::sqrt(std::max(0.0, d.dot(S * d)));
  }
  if (!(arc[n] > 0.0)) return;
  std::vector<Vector> out(path.begin() + i0, path.begin() + i1 + 1);
  int seg = 1;
  for (int j = 1; j < n; ++j) {
    const double target = arc[n] * j / n;
    while (seg < n && arc[seg] < target) ++seg;
    const double len = arc[seg] - arc[seg - 1];
    const double t = len > 0.0 ? (target - arc[seg - 1]) / len : 0.0;
    out[j] = (1.0 - t) * path[i0 + seg - 1] + t * path[i0 + seg];
  }
  for (int j = 1; j < n; ++j) path[i0 + j] = out[j];
}

}  // namespace

SolutionRecord mountain_pass(const EnergyContext& ctx, const MpGeometry& geometry,
                             const MountainPassOptions& options) {
  if (options.path_points < 16) throw Error(Errc::BadParams, "mountain pass needs at least 16 path points");
  if (!(geometry.beta > 0.0)) throw Error(Errc::GeometryFailure, "mountain-pass geometry has beta <= 0");
  const Matrix& S = ctx.sys().S;
  const Vector& e = geometry.e_point.coeffs;
  const int m = options.path_points - 1;
  std::vector<Vector> path(m + 1);
  for (int j = 0; j <= m; ++j) path[j] = (static_cast<double>(j) / m) * e;
  std::vector<double> E(m + 1);
  for (int j = 0; j <= m; ++j) E[j] = eval_energy(ctx, path[j]);

  SolutionRecord rec;
  rec.solver = "mountain_pass";
  rec.classification = Classification::mountain_pass;
  rec.seed = ctx.sys().spec.seed;
  double step = 0.5;
  double prev_res = INFINITY;
  int jprev = -1;
  for (int it = 0;; ++it) {
    int jmax = 0;
    for (int j = 1; j <= m; ++j) {
      if (E[j] > E[jmax]) jmax = j;
    }
    if (jmax == 0 || jmax == m) {
      throw Error(Errc::PathCollapse, "path maximum reached an endpoint");
    }
    if (jmax != jprev) prev_res = INFINITY;
    jprev = jmax;
    Vector& z = path[jmax];
    const Vector g = grad_h(ctx, z);
    const double res = std::sqrt(std::max(0.0, g.dot(S * g)));
    rec.trace.push_back({it, E[jmax], res, std::sqrt(std::max(0.0, z.dot(S * z)))});
    if (res < options.tol) {
      rec.u = DiscreteFunction::from(ctx.sys().spec, z);
      rec.energy = E[jmax];
      rec.residual = res;
      rec.iterations = it;
      rec.accepted = true;
      return rec;
    }
    if (it >= options.max_iter) {
      throw Error(Errc::MaxIterExceeded, "mountain pass stopped at residual " + std::to_string(res));
    }
    // climbing step: downhill across the path, uphill along it
    Vector tau = path[jmax + 1] - path[jmax - 1];
    tau /= std::sqrt(std::max(1e-300, tau.dot(S * tau)));
    const Vector d = g - 2.0 * tau.dot(S * g) * tau;
    if (res > prev_res) step *= 0.5;
    else step = std::min(1.0, 1.1 * step);
    prev_res = res;
    z -= step * d;
    E[jmax] = eval_energy(ctx, z);
    if (options.reparam_every > 0 && (it + 1) % options.reparam_every == 0) {
      equidistribute(S, path, 0, jmax);
      equidistribute(S, path, jmax, m);
      for (int j = 1; j < m; ++j) E[j] = eval_energy(ctx, path[j]);
    }
    if (step < 1e-12) throw Error(Errc::PathCollapse, "climbing step collapsed");
  }
}

}  // namespace fraclap
