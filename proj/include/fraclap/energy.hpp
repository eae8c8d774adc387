#pragma once

#include "fraclap/assembly.hpp"
#include "fraclap/basis.hpp"
#include "fraclap/forcing.hpp"

namespace fraclap {

/// Everything needed to evaluate J_{lambda,mu}(u) = 1/2 u^T S u - int F_{lambda,mu}(x, u)
/// and its derivatives. Holds its own copies; immutable after construction.
class EnergyContext {
 public:
  /// Throws FactorizationFailure if S is not SPD.
  EnergyContext(AssembledSystem sys, Basis basis, Forcing forcing);

  const AssembledSystem& sys() const { return sys_; }
  const Basis& basis() const { return basis_; }
  const Forcing& forcing() const { return forcing_; }
  const Eigen::LLT<Matrix>& chol() const { return chol_; }
  int dim() const { return sys_.dim(); }

  /// max |L L^T - S| / max |S|
  double refactorization_error() const;

  /// Same system and basis, different forcing.
  EnergyContext with_forcing(Forcing forcing) const;

 private:
  AssembledSystem sys_;
  Basis basis_;
  Forcing forcing_;
  Eigen::LLT<Matrix> chol_;
};

double eval_energy(const EnergyContext& ctx, const Vector& u);

/// r = S u - b(u), the coefficient residual.
Vector residual(const EnergyContext& ctx, const Vector& u);

/// H-gradient g = S^{-1} r, so <J'(u), phi> = g^T S phi.
Vector grad_h(const EnergyContext& ctx, const Vector& u);

/// Dual norm of J'(u): sqrt(r^T S^{-1} r). Throws SolveFailure if the
/// solve produces non-finite values.
double residual_norm(const EnergyContext& ctx, const Vector& u);

/// (S - M_f(u)) v with (M_f)_ij = int d_t f(x, u) phi_i phi_j. Sets *clamped
/// when a singular concave derivative was clamped.
Vector hessian_apply(const EnergyContext& ctx, const Vector& u, const Vector& v,
                     bool* clamped = nullptr);

/// The assembled matrix S - M_f(u).
Matrix hessian(const EnergyContext& ctx, const Vector& u, bool* clamped = nullptr);

}  // namespace fraclap
