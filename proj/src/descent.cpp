#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

BallMinimum projected_descent(const EnergyContext& ctx, const Matrix* B, double rho,
                              const Vector& start, const DescentOptions& options) {
  if (!(rho > 0.0)) throw Error(Errc::BadParams, "ball radius must be positive");
  const Matrix& S = ctx.sys().S;
  // Work in coordinates z with u = B z (Euclidean metric) or u = z (S metric).
  auto lift = [&](const Vector& z) -> Vector { return B ? Vector(*B * z) : z; };
  auto norm = [&](const Vector& z) {
    return B ? z.norm() : std::sqrt(std::max(0.0, z.dot(S * z)));
  };
  auto inner = [&](const Vector& x, const Vector& y) { return B ? x.dot(y) : x.dot(S * y); };
  auto gradient = [&](const Vector& z) -> Vector {
    const Vector r = residual(ctx, lift(z));
    return B ? Vector(B->transpose() * r) : Vector(ctx.chol().solve(r));
  };
  auto clip = [&](Vector z) {
    const double n = norm(z);
    if (n > rho) z *= rho / n;
    return z;
  };

  Vector z = clip(start);
  double J = eval_energy(ctx, lift(z));
  BallMinimum out;
  double step = 1.0;
  for (int it = 0;; ++it) {
    const Vector g = gradient(z);
    const double stat = norm(z - clip(z - g));
    out.trace.push_back({it, J, stat, norm(z)});
    if (stat < options.descent_tol) {
      out.iterations = it;
      break;
    }
    if (it >= options.max_iter) {
      throw Error(Errc::MaxIterExceeded, "ball descent stopped at residual " + std::to_string(stat));
    }
    step = std::min(1.0, 2.0 * step);
    bool moved = false;
    for (int b = 0; b < 60; ++b, step *= 0.5) {
      const Vector zn = clip(z - step * g);
      const double Jn = eval_energy(ctx, lift(zn));
      if (Jn <= J + 1e-4 * inner(g, Vector(zn - z))) {
        moved = Jn < J || zn == z;
        z = zn;
        J = Jn;
        break;
      }
    }
    if (!moved) {
      out.iterations = it;
      break;  // no further decrease at roundoff level
    }
  }
  out.u = lift(z);
  out.energy = J;
  out.restricted_residual = out.trace.back().residual;
  out.on_boundary = norm(z) >= rho * (1.0 - 1e-8);
  return out;
}

SolutionRecord ball_minimize(const EnergyContext& ctx, double rho, const DescentOptions& options) {
  const auto& sys = ctx.sys();
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sys.S, sys.M);
  Vector phi = es.eigenvectors().col(0);
  if (phi.sum() < 0.0) phi = -phi;
  phi /= h_norm(sys, phi);

  SolutionRecord rec;
  rec.solver = "ball_min";
  rec.classification = Classification::ball_min;
  rec.seed = sys.spec.seed;
  double t = 0.5 * rho;
  bool found = false;
  for (int i = 0; i < 60; ++i, t *= 0.5) {
    if (eval_energy(ctx, t * phi) < 0.0) {
      found = true;
      break;
    }
  }
  if (!found) {
    rec.classification = Classification::trivial;
    rec.u = DiscreteFunction::zero(sys.spec);
    rec.residual = residual_norm(ctx, rec.u.coeffs);
    return rec;
  }
  const BallMinimum bm = projected_descent(ctx, nullptr, rho, t * phi, options);
  if (bm.on_boundary) {
    throw Error(Errc::BoundaryMinimizer, "minimizer in the ball lies on its boundary");
  }
  SolutionRecord refined = newton_refine(ctx, bm.u, options.tol);
  if (h_norm(sys, refined.u.coeffs) >= rho - 1e-8) {
    throw Error(Errc::BoundaryMinimizer, "refined minimizer left the ball");
  }
  rec.u = refined.u;
  rec.energy = refined.energy;
  rec.residual = refined.residual;
  rec.iterations = bm.iterations + refined.iterations;
  rec.trace = bm.trace;
  const int base = bm.iterations + 1;
  for (auto tp : refined.trace) {
    tp.iter += base;
    rec.trace.push_back(tp);
  }
  rec.accepted = refined.accepted && rec.energy < 0.0;
  return rec;
}

}  // namespace fraclap
