#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/energy.hpp"
#include "fraclap/spectrum.hpp"

namespace fraclap {

struct TracePoint {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
  double norm = 0.0;
};

using Trace = std::vector<TracePoint>;

enum class Classification { mountain_pass, ball_min, fountain_k, dual_fountain_k, newton_refined, trivial };

std::string classification_name(Classification c, int k = 0);

struct SolutionRecord {
  DiscreteFunction u;
  double energy = 0.0;
  double residual = 0.0;
  std::string solver;
  int iterations = 0;
  std::uint64_t seed = 0;
  Classification classification = Classification::trivial;
  int k = 0;  // subspace index for the fountain families
  bool accepted = false;
  Trace trace;

  std::string label() const { return classification_name(classification, k); }
};

/// Snapshot of a record's iterate (energy, residual, norm) for traces.
TracePoint trace_point(const EnergyContext& ctx, const Vector& u, int iter);

/// delta(eps) supplier, typically bound to extract_delta.
using DeltaFn = std::function<double(double)>;

struct EmbeddingConstants {
  double c2 = 0.0;
  double cp = 0.0;
  double cq = 0.0;
};

/// c_2, c_p, c_q by estimate_embedding_constant (p is skipped when <= 0).
EmbeddingConstants embedding_constants(const EnergyContext& ctx, double p, double q, int restarts = 8);

/// Mountain-pass geometry of J.
struct MpGeometry {
  double eps = 0.0;
  double delta_eps = 0.0;
  double c2 = 0.0;
  double cq = 0.0;
  double alpha = 0.0;
  double kappa = 0.0;
  double rho = 0.0;
  double beta = 0.0;
  DiscreteFunction e_point;
  double e_energy = 0.0;
};

/// eps = 1/(4 c2^2) so alpha = 1/4; kappa = delta(eps) cq^q / alpha;
/// rho = (2/(q kappa))^{1/(q-2)}; beta = alpha rho^2 (1 - kappa rho^{q-2}).
/// e = T phi with phi the unit first eigenfunction, T doubled from 2 rho
/// until J(e) < 0. Throws GeometryFailure.
MpGeometry mp_geometry(const EnergyContext& ctx, double q, const DeltaFn& delta,
                       const EmbeddingConstants& consts);

/// Small-lambda geometry of J_lambda = 1/2 ||u||^2 - lambda/p |u|_p^p - int G.
struct LambdaStar {
  double p = 1.5;
  double q = 4.0;
  double eps = 0.0;
  double delta_eps = 0.0;
  double A = 0.25;
  double K = 0.0;
  double C_q = 0.0;
  double beta_bar = 0.0;
  double p_bar = 0.0;
  double q_bar = 0.0;
  double lambda_star = 0.0;
  double lambda = 0.0;
  double t0 = 0.0;
  double Q_t0 = 0.0;
  double R = 0.0;  // A - Q(t0); the ball radius is rho = t0
  bool below_threshold = false;

  double Q(double t) const;
};

/// Throws BadExponents unless 1 < p < 2 < q.
LambdaStar lambda_star(double p, double q, double lambda, const DeltaFn& delta_g,
                       const EmbeddingConstants& consts);

/// Mountain-pass geometry of J_lambda below the threshold: rho = t0 and the
/// sphere bound J >= t0^2 (A - Q(t0)). Throws GeometryFailure unless
/// 0 < lambda < lambda*.
MpGeometry cc_geometry(const EnergyContext& ctx, const LambdaStar& ls);

/// |F(t)| <= C (1 + |t|^q) on the audit grid.
double growth_constant(const Nonlinearity& nl, double q, double tmax = 1e8);

struct FountainConstants {
  double C = 0.0;
  std::vector<double> beta_q;
  std::vector<double> gamma;    // (q C beta_k^q)^{-1/(q-2)}
  std::vector<double> b_bound;  // (1/2 - 1/q) gamma_k^2 - C |Omega|
};

FountainConstants fountain_constants(const std::vector<double>& beta_q, double q, double C,
                                     double omega_length);

struct DualConstants {
  double eps0 = 0.0;
  double delta_eps0 = 0.0;
  double C2 = 0.0;
  double Cq = 0.0;
  double R = 0.0;
  std::vector<double> beta_p;
  std::vector<double> rho;      // min{R, (4 lambda beta_k^p / p)^{1/(2-p)}}
  std::vector<double> a_bound;  // rho_k^2 (1/4 - lambda/p beta_k^p rho_k^{p-2}) >= 0
  std::vector<double> d_bound;  // -(lambda/p) beta_k^p R^p
};

DualConstants dual_constants(const std::vector<double>& beta_p, double lambda, double mu,
                             double p, double q, const DeltaFn& delta_g,
                             const EmbeddingConstants& consts);

struct MountainPassOptions {
  int path_points = 32;
  double tol = 1e-5;
  int max_iter = 20000;
  int reparam_every = 1;
};

/// Discrete path 0 = z_0, ..., z_m = e. Each iteration takes one H-gradient
/// step at the path maximum with the component along the path reversed (a
/// climbing step, so the point descends across the path and rises along it),
/// then re-equidistributes both sides of that point in the H norm. The step
/// length is halved whenever the residual grows. Throws MaxIterExceeded,
/// PathCollapse, GeometryFailure (beta <= 0), BadParams (path_points < 16).
SolutionRecord mountain_pass(const EnergyContext& ctx, const MpGeometry& geometry,
                             const MountainPassOptions& options = {});

/// Newton on r(c) = S c - b(c) with Jacobian S - M_f and residual
/// backtracking. Throws SingularJacobian, Diverged.
SolutionRecord newton_refine(const EnergyContext& ctx, const Vector& u0, double tol = 1e-10,
                             int max_iter = 50);

struct DescentOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  double descent_tol = 1e-6;  // switch to Newton once the projected residual is below
};

/// min J over the closed S-ball of radius rho, restricted to span(B) when B
/// is given (S-orthonormal columns). Returns the minimizer of the restricted
/// problem before any refinement; `on_boundary` reports whether it sits on
/// the sphere.
struct BallMinimum {
  Vector u;
  double energy = 0.0;
  double restricted_residual = 0.0;
  bool on_boundary = false;
  int iterations = 0;
  Trace trace;
};

BallMinimum projected_descent(const EnergyContext& ctx, const Matrix* B, double rho,
                              const Vector& start, const DescentOptions& options);

/// Ekeland-type minimizer of J in the S-ball of radius rho, refined by Newton.
/// Starts from t e_1 with J(t e_1) < 0; when no such t exists (no concave
/// term) returns the trivial record with accepted = false.
/// Throws BoundaryMinimizer, MaxIterExceeded.
SolutionRecord ball_minimize(const EnergyContext& ctx, double rho,
                             const DescentOptions& options = {});

struct FountainOptions {
  double tol = 1e-10;
  int seeds_per_k = 4;
  std::uint64_t seed = 0;
  double distinct_tol = 1e-4;
};

/// Solutions of the symmetric superlinear problem seeded in Z_k, k = 1..k_max:
/// every seed is scaled to the maximum of J along its ray, then refined by
/// damped Newton and deflated against the solutions found so far (modulo
/// sign). Returns +- pairs sorted by energy. Throws InsufficientSolutions if
/// fewer than two distinct nontrivial pairs are found.
std::vector<SolutionRecord> fountain_search(const EnergyContext& ctx, const SpectralData& spectral,
                                            int k_max, const FountainOptions& options = {});

/// Negative-energy solutions of the concave-convex problem: for each k the
/// minimum of J over Z_k within the ball of radius rho_k, refined by Newton
/// in the full space. Throws BoundaryMinimizer; NotCritical if the refined
/// point leaves the ball by more than 10%. Skipped duplicates are dropped.
std::vector<SolutionRecord> dual_fountain_search(const EnergyContext& ctx,
                                                 const SpectralData& spectral,
                                                 const std::vector<int>& k_range,
                                                 const DualConstants& constants,
                                                 const FountainOptions& options = {});

struct PsReport {
  double max_norm = 0.0;
  bool bounded = true;
  double final_residual = 0.0;
  double residual_ratio = 0.0;  // last / first
  bool chain_checked = false;
  bool chain_holds = true;
  int chain_violations = 0;
};

/// Runtime Palais-Smale monitors. When lambda, p, q and beta0 are given the
/// concave-convex boundedness chain
///   (1/2 - 1/q) ||u||^2 <= J(u) + ||J'(u)|| ||u|| + (lambda/p - lambda/q) beta0^p ||u||^p
/// is re-evaluated at every trace point.
struct ChainParams {
  double lambda = 0.0;
  double p = 1.5;
  double q = 4.0;
  double beta0 = 0.0;
};

PsReport ps_diagnostics(const Trace& trace, const std::optional<ChainParams>& chain = std::nullopt);

}  // namespace fraclap
