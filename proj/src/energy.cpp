#include "fraclap/energy.hpp"

#include "fraclap/error.hpp"

namespace fraclap {

EnergyContext::EnergyContext(AssembledSystem sys, Basis basis, Forcing forcing)
    : sys_(std::move(sys)), basis_(std::move(basis)), forcing_(std::move(forcing)), chol_(sys_.S) {
  if (chol_.info() != Eigen::Success) {
    throw Error(Errc::FactorizationFailure, "stiffness matrix is not positive definite");
  }
}

double EnergyContext::refactorization_error() const {
  const Matrix L = chol_.matrixL();
  return (L * L.transpose() - sys_.S).cwiseAbs().maxCoeff() / sys_.S.cwiseAbs().maxCoeff();
}

EnergyContext EnergyContext::with_forcing(Forcing forcing) const {
  return EnergyContext(sys_, basis_, std::move(forcing));
}

double eval_energy(const EnergyContext& ctx, const Vector& u) {
  return 0.5 * u.dot(ctx.sys().S * u) - potential_integral(ctx.basis(), ctx.forcing(), u);
}

Vector residual(const EnergyContext& ctx, const Vector& u) {
  return ctx.sys().S * u - load_vector(ctx.basis(), ctx.forcing(), u);
}

Vector grad_h(const EnergyContext& ctx, const Vector& u) {
  Vector g = ctx.chol().solve(residual(ctx, u));
  if (!g.allFinite()) throw Error(Errc::SolveFailure, "stiffness solve produced non-finite values");
  return g;
}

double residual_norm(const EnergyContext& ctx, const Vector& u) {
  const Vector r = residual(ctx, u);
  const Vector g = ctx.chol().solve(r);
  if (!g.allFinite()) throw Error(Errc::SolveFailure, "stiffness solve produced non-finite values");
  return std::sqrt(std::max(0.0, r.dot(g)));
}

Matrix hessian(const EnergyContext& ctx, const Vector& u, bool* clamped) {
  return ctx.sys().S - derivative_mass(ctx.basis(), ctx.forcing(), u, clamped);
}

Vector hessian_apply(const EnergyContext& ctx, const Vector& u, const Vector& v, bool* clamped) {
  return hessian(ctx, u, clamped) * v;
}

}  // namespace fraclap
