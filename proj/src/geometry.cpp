#include <cmath>

#include "fraclap/audit.hpp"
#include "fraclap/error.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

namespace {

// e = T phi with phi the H-unit first eigenvector, T doubled from 2 rho until
// J(e) < 0.
void set_endpoint(const EnergyContext& ctx, MpGeometry& g) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(ctx.sys().S, ctx.sys().M);
  Vector phi = es.eigenvectors().col(0);
  if (phi.sum() < 0.0) phi = -phi;
  phi /= h_norm(ctx.sys(), phi);
  double T = 2.0 * g.rho;
  for (int i = 0; i < 60; ++i, T *= 2.0) {
    const Vector e = T * phi;
    const double J = eval_energy(ctx, e);
    if (J < 0.0) {
      g.e_point = DiscreteFunction::from(ctx.sys().spec, e);
      g.e_energy = J;
      return;
    }
  }
  throw Error(Errc::GeometryFailure, "no point with negative energy along the first eigendirection");
}

}  // namespace

std::string classification_name(Classification c, int k) {
  switch (c) {
    case Classification::mountain_pass: return "mountain_pass";
    case Classification::ball_min: return "ball_min";
    case Classification::fountain_k: return "fountain_" + std::to_string(k);
    case Classification::dual_fountain_k: return "dual_fountain_" + std::to_string(k);
    case Classification::newton_refined: return "newton_refined";
    case Classification::trivial: return "trivial";
  }
  return "trivial";
}

TracePoint trace_point(const EnergyContext& ctx, const Vector& u, int iter) {
  TracePoint tp;
  tp.iter = iter;
  tp.energy = eval_energy(ctx, u);
  tp.residual = residual_norm(ctx, u);
  tp.norm = h_norm(ctx.sys(), u);
  return tp;
}

EmbeddingConstants embedding_constants(const EnergyContext& ctx, double p, double q, int restarts) {
  EmbeddingConstants c;
  c.c2 = estimate_embedding_constant(ctx.sys(), ctx.basis(), 2.0, restarts);
  if (p > 0.0) c.cp = estimate_embedding_constant(ctx.sys(), ctx.basis(), p, restarts);
  c.cq = estimate_embedding_constant(ctx.sys(), ctx.basis(), q, restarts);
  return c;
}

MpGeometry mp_geometry(const EnergyContext& ctx, double q, const DeltaFn& delta,
                       const EmbeddingConstants& consts) {
  if (!(q > 2.0)) throw Error(Errc::BadExponents, "mountain-pass geometry needs q > 2");
  MpGeometry g;
  g.c2 = consts.c2;
  g.cq = consts.cq;
  g.eps = 1.0 / (4.0 * g.c2 * g.c2);
  g.alpha = 0.5 - g.eps * g.c2 * g.c2;
  g.delta_eps = delta(g.eps);
  if (!(g.delta_eps > 0.0) || !std::isfinite(g.delta_eps)) {
    throw Error(Errc::GeometryFailure, "delta(eps) is not a positive number");
  }
  g.kappa = g.delta_eps * std::pow(g.cq, q) / g.alpha;
  if (!(g.kappa > 0.0) || !std::isfinite(g.kappa)) throw Error(Errc::GeometryFailure, "kappa is not positive");
  g.rho = std::pow(2.0 / (q * g.kappa), 1.0 / (q - 2.0));
  g.beta = g.alpha * g.rho * g.rho * (1.0 - g.kappa * std::pow(g.rho, q - 2.0));
  if (!(g.beta > 0.0)) throw Error(Errc::GeometryFailure, "beta is not positive");
  set_endpoint(ctx, g);
  return g;
}

MpGeometry cc_geometry(const EnergyContext& ctx, const LambdaStar& ls) {
  if (!(ls.lambda > 0.0) || !ls.below_threshold || !(ls.R > 0.0)) {
    throw Error(Errc::GeometryFailure, "lambda is not below the threshold lambda*");
  }
  MpGeometry g;
  g.eps = ls.eps;
  g.delta_eps = ls.delta_eps;
  g.alpha = ls.A;
  g.rho = ls.t0;
  g.beta = ls.t0 * ls.t0 * ls.R;
  set_endpoint(ctx, g);
  return g;
}

double LambdaStar::Q(double t) const {
  return lambda * K * std::pow(t, p - 2.0) + C_q * std::pow(t, q - 2.0);
}

LambdaStar lambda_star(double p, double q, double lambda, const DeltaFn& delta_g,
                       const EmbeddingConstants& consts) {
  if (!(1.0 < p && p < 2.0 && 2.0 < q)) throw Error(Errc::BadExponents, "need 1 < p < 2 < q");
  if (!(lambda >= 0.0)) throw Error(Errc::BadParams, "lambda must be nonnegative");
  LambdaStar ls;
  ls.p = p;
  ls.q = q;
  ls.lambda = lambda;
  ls.eps = 1.0 / (4.0 * consts.c2 * consts.c2);
  ls.A = 0.5 - ls.eps * consts.c2 * consts.c2;
  ls.delta_eps = delta_g(ls.eps);
  ls.K = std::pow(consts.cp, p) / p;
  ls.C_q = ls.delta_eps * std::pow(consts.cq, q);
  if (!(ls.C_q > 0.0) || !std::isfinite(ls.C_q)) {
    throw Error(Errc::GeometryFailure, "delta(eps) is not a positive number");
  }
  ls.beta_bar = ls.K * (2.0 - p) / (ls.C_q * (q - 2.0));
  ls.p_bar = (p - 2.0) / (q - p);
  ls.q_bar = (q - 2.0) / (q - p);
  ls.lambda_star = std::pow(
      ls.A / (ls.K * std::pow(ls.beta_bar, ls.p_bar) + ls.C_q * std::pow(ls.beta_bar, ls.q_bar)),
      1.0 / ls.q_bar);
  ls.below_threshold = lambda < ls.lambda_star;
  if (lambda > 0.0) {
    ls.t0 = std::pow(lambda * ls.beta_bar, 1.0 / (q - p));
    ls.Q_t0 = ls.Q(ls.t0);
    ls.R = ls.A - ls.Q_t0;
  }
  return ls;
}

double growth_constant(const Nonlinearity& nl, double q, double tmax) {
  double C = 0.0;
  for (double t : audit_grid(tmax)) {
    C = std::max(C, std::abs(nl.F(0.0, t)) / (1.0 + std::pow(std::abs(t), q)));
  }
  return C;
}

FountainConstants fountain_constants(const std::vector<double>& beta_q, double q, double C,
                                     double omega_length) {
  if (!(q > 2.0)) throw Error(Errc::BadExponents, "fountain constants need q > 2");
  FountainConstants fc;
  fc.C = C;
  fc.beta_q = beta_q;
  for (double b : beta_q) {
    const double g = std::pow(q * C * std::pow(b, q), -1.0 / (q - 2.0));
    fc.gamma.push_back(g);
    fc.b_bound.push_back((0.5 - 1.0 / q) * g * g - C * omega_length);
  }
  return fc;
}

DualConstants dual_constants(const std::vector<double>& beta_p, double lambda, double mu,
                             double p, double q, const DeltaFn& delta_g,
                             const EmbeddingConstants& consts) {
  if (!(1.0 < p && p < 2.0 && 2.0 < q)) throw Error(Errc::BadExponents, "need 1 < p < 2 < q");
  if (!(lambda > 0.0) || !(mu > 0.0)) throw Error(Errc::BadParams, "need lambda > 0 and mu > 0");
  DualConstants dc;
  dc.C2 = consts.c2 * consts.c2;
  dc.eps0 = 1.0 / (8.0 * mu * dc.C2);
  dc.delta_eps0 = delta_g(dc.eps0);
  dc.Cq = dc.delta_eps0 * std::pow(consts.cq, q);
  if (!(dc.Cq > 0.0) || !std::isfinite(dc.Cq)) {
    throw Error(Errc::GeometryFailure, "delta(eps0) is not a positive number");
  }
  dc.R = std::pow(1.0 / (8.0 * mu * dc.Cq), 1.0 / (q - 2.0));
  dc.beta_p = beta_p;
  for (double b : beta_p) {
    const double bp = std::pow(b, p);
    const double r = std::min(dc.R, std::pow(4.0 * lambda * bp / p, 1.0 / (2.0 - p)));
    dc.rho.push_back(r);
    dc.a_bound.push_back(r * r * (0.25 - lambda / p * bp * std::pow(r, p - 2.0)));
    dc.d_bound.push_back(-(lambda / p) * bp * std::pow(dc.R, p));
  }
  return dc;
}

}  // namespace fraclap
