#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

SolutionRecord newton_refine(const EnergyContext& ctx, const Vector& u0, double tol, int max_iter) {
  SolutionRecord rec;
  rec.solver = "newton";
  rec.classification = Classification::newton_refined;
  rec.seed = ctx.sys().spec.seed;
  Vector u = u0;
  double res = residual_norm(ctx, u);
  rec.trace.push_back(trace_point(ctx, u, 0));
  int it = 0;
  for (; res >= tol; ++it) {
    if (it >= max_iter) {
      throw Error(Errc::Diverged, "Newton did not reach the tolerance in " + std::to_string(max_iter) +
                                      " steps (residual " + std::to_string(res) + ")");
    }
    const Matrix H = hessian(ctx, u);
    Eigen::PartialPivLU<Matrix> lu(H);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) throw Error(Errc::SingularJacobian, "Jacobian is numerically singular");
    const Vector du = lu.solve(-residual(ctx, u));
    if (!du.allFinite()) throw Error(Errc::SingularJacobian, "Newton step is not finite");
    // backtracking on the dual residual norm
    double step = 1.0;
    Vector un;
    double resn = INFINITY;
    for (int b = 0; b < 40; ++b, step *= 0.5) {
      un = u + step * du;
      resn = residual_norm(ctx, un);
      if (resn < (1.0 - 1e-4 * step) * res) break;
    }
    if (!(resn < res)) {
      if (res < 1e3 * tol && res < 1e-6) break;  // at the roundoff floor
      throw Error(Errc::Diverged, "Newton line search failed at residual " + std::to_string(res));
    }
    u = un;
    res = resn;
    rec.trace.push_back(trace_point(ctx, u, it + 1));
  }
  rec.u = DiscreteFunction::from(ctx.sys().spec, u);
  rec.energy = eval_energy(ctx, u);
  rec.residual = res;
  rec.iterations = it;
  rec.accepted = res < tol;
  return rec;
}

}  // namespace fraclap
