#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclap/audit.hpp"
#include "fraclap/error.hpp"
#include "fraclap/solvers.hpp"

using namespace fraclap;

namespace {

template <class Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Io;
}

DeltaFn delta_of(const Nonlinearity& g, double q) {
  return [g, q](double eps) { return extract_delta(g, eps, q, 1e8); };
}

EnergyContext context(double b, const Forcing& forcing, int N = 32) {
  auto spec = make_problem(1.5, 0, b, N, 0);
  Basis basis(spec);
  return EnergyContext(assemble(spec, basis), basis, forcing);
}

const Nonlinearity& power4() {
  static const Nonlinearity nl = make_nonlinearity(NlKind::power);
  return nl;
}

// Pure power q = 4 on (0, 1), N = 32, with its geometry and solution.
struct PowerRun {
  EnergyContext ctx;
  EmbeddingConstants ec;
  MpGeometry geo;
  SolutionRecord mp;
  SolutionRecord refined;

  PowerRun()
      : ctx(context(1.0, Forcing::from(power4()))),
        ec(embedding_constants(ctx, 0.0, 4.0)),
        geo(mp_geometry(ctx, 4.0, delta_of(power4(), 4.0), ec)),
        mp(mountain_pass(ctx, geo)),
        refined(newton_refine(ctx, mp.u.coeffs)) {}
};

const PowerRun& power_run() {
  static const PowerRun run;
  return run;
}

// Concave-convex pair lambda |u|^{-1/2} u + |u|^2 u.
struct CcRun {
  EnergyContext base;
  EmbeddingConstants ec;
  double lambda_star = 0.0;

  explicit CcRun(double b)
      : base(context(b, Forcing::from(power4()))), ec(embedding_constants(base, 1.5, 4.0)) {
    lambda_star = fraclap::lambda_star(1.5, 4.0, 0.0, delta_of(power4(), 4.0), ec).lambda_star;
  }

  EnergyContext at(double lambda) const { return base.with_forcing(Forcing::of(power4(), lambda, 1.0, 1.5)); }
  LambdaStar chain(double lambda) const { return fraclap::lambda_star(1.5, 4.0, lambda, delta_of(power4(), 4.0), ec); }
};

const CcRun& cc_unit() {
  static const CcRun run(1.0);
  return run;
}

}  // namespace

TEST_CASE("mountain-pass geometry of the pure power") {
  const auto& run = power_run();
  const auto& g = run.geo;
  CHECK(g.delta_eps == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.alpha == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.eps == doctest::Approx(1.0 / (4 * g.c2 * g.c2)));
  CHECK(g.kappa == doctest::Approx(std::pow(g.cq, 4) / (4 * g.alpha)).epsilon(1e-12));
  CHECK(g.rho == doctest::Approx(std::sqrt(2.0 / (4 * g.kappa))).epsilon(1e-12));
  CHECK(g.beta == doctest::Approx(g.alpha * g.rho * g.rho * (1 - g.kappa * g.rho * g.rho)).epsilon(1e-12));
  CHECK(g.c2 == doctest::Approx(0.0486986).epsilon(1e-5));
  CHECK(g.cq == doctest::Approx(0.056099).epsilon(1e-5));
  CHECK(g.beta > 0.0);
  CHECK(g.e_energy < 0.0);
  CHECK(h_norm(run.ctx.sys(), g.e_point.coeffs) > g.rho);

  std::mt19937 gen(5);
  std::normal_distribution<double> n;
  double lowest = 1e300;
  for (int i = 0; i < 500; ++i) {
    Vector u(run.ctx.dim());
    for (int j = 0; j < u.size(); ++j) u[j] = n(gen);
    u *= g.rho / h_norm(run.ctx.sys(), u);
    lowest = std::min(lowest, eval_energy(run.ctx, u));
  }
  CHECK(g.beta <= lowest + 1e-6);
}

TEST_CASE("geometry fails without superlinear growth") {
  auto ctx = context(1.0, Forcing::from(make_nonlinearity(NlKind::zero)), 16);
  auto ec = embedding_constants(ctx, 0.0, 4.0);
  CHECK(error_of([&] { mp_geometry(ctx, 4.0, [](double) { return 0.0; }, ec); }) == Errc::GeometryFailure);
}

TEST_CASE("mountain pass on the pure power") {
  const auto& run = power_run();
  CHECK(run.mp.residual < 1e-5);
  CHECK(run.mp.classification == Classification::mountain_pass);
  CHECK(run.mp.energy > 0.0);
  CHECK(h_norm(run.ctx.sys(), run.mp.u.coeffs) > run.geo.rho / 2);
  REQUIRE(run.refined.accepted);
  CHECK(run.refined.residual < 1e-10);
  CHECK(run.refined.iterations <= 8);
  CHECK(run.refined.energy >= run.geo.beta - 1e-6);
  // least-energy level of the pure power, from the embedding constant alone
  const double ground = 0.25 * std::pow(run.ec.cq, -4.0);
  CHECK(run.refined.energy == doctest::Approx(ground).epsilon(1e-6));
  CHECK(run.refined.energy == doctest::Approx(25241.81704).epsilon(1e-8));
  // (S) makes -u a solution at the same level
  const Vector neg = -run.refined.u.coeffs;
  CHECK(eval_energy(run.ctx, neg) == run.refined.energy);
  CHECK(residual_norm(run.ctx, neg) == doctest::Approx(run.refined.residual).epsilon(1e-6));
  // the trace is bounded and ends below the tolerance
  auto ps = ps_diagnostics(run.mp.trace);
  CHECK(ps.bounded);
  CHECK(ps.final_residual < 1e-5);
}

TEST_CASE("mountain pass without a pass") {
  auto ctx = context(1.0, Forcing::from(make_nonlinearity(NlKind::zero)), 16);
  MpGeometry g;
  g.rho = 1.0;
  g.beta = 0.1;
  Vector e = Vector::Ones(ctx.dim());
  g.e_point = DiscreteFunction::from(ctx.sys().spec, e);
  g.e_energy = eval_energy(ctx, e);
  CHECK(error_of([&] { mountain_pass(ctx, g); }) == Errc::PathCollapse);
  g.beta = 0.0;
  CHECK(error_of([&] { mountain_pass(ctx, g); }) == Errc::GeometryFailure);
  MountainPassOptions few;
  few.path_points = 8;
  g.beta = 0.1;
  CHECK(error_of([&] { mountain_pass(ctx, g, few); }) == Errc::BadParams);
}

TEST_CASE("Newton refinement") {
  const auto& run = power_run();
  auto again = newton_refine(run.ctx, run.refined.u.coeffs);
  CHECK(again.accepted);
  CHECK(again.iterations == 0);
  CHECK(again.u.coeffs == run.refined.u.coeffs);

  // quadratic convergence from a 5% perturbation
  auto far = newton_refine(run.ctx, 1.05 * run.refined.u.coeffs);
  REQUIRE(far.accepted);
  const auto& tr = far.trace;
  REQUIRE(tr.size() >= 4);
  // r_{k+1} / r_k^2 stays bounded (about 2e-3 here) until the roundoff floor
  for (std::size_t i = 1; i < tr.size() && tr[i].residual > 1e-9; ++i) {
    CAPTURE(i);
    CHECK(tr[i].residual <= 1e-2 * tr[i - 1].residual * tr[i - 1].residual);
  }
  CHECK(tr.back().residual < 1e-10);
}

TEST_CASE("small-lambda threshold") {
  const auto& cc = cc_unit();
  CHECK(cc.lambda_star == doctest::Approx(366.6747).epsilon(1e-5));
  auto at_star = cc.chain(cc.lambda_star);
  CHECK(at_star.Q_t0 == doctest::Approx(at_star.A).epsilon(1e-9));
  auto above = cc.chain(2 * cc.lambda_star);
  CHECK(above.Q_t0 > above.A);
  CHECK_FALSE(above.below_threshold);
  CHECK(error_of([&] { cc_geometry(cc.at(2 * cc.lambda_star), above); }) == Errc::GeometryFailure);
  double last_t0 = 1e300, last_Q = 1e300;
  for (double frac : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto ls = cc.chain(frac * cc.lambda_star);
    CHECK(ls.below_threshold);
    CHECK(ls.t0 < last_t0);
    CHECK(ls.Q_t0 < last_Q);
    last_t0 = ls.t0;
    last_Q = ls.Q_t0;
  }
  CHECK(last_Q < 1e-2 * cc.chain(0.1 * cc.lambda_star).A);
  CHECK(error_of([&] { fraclap::lambda_star(2.5, 4.0, 1.0, delta_of(power4(), 4.0), cc.ec); }) == Errc::BadExponents);
  CHECK(error_of([&] { fraclap::lambda_star(1.5, 4.0, -1.0, delta_of(power4(), 4.0), cc.ec); }) == Errc::BadParams);
}

TEST_CASE("two solutions below the threshold") {
  const auto& cc = cc_unit();
  const double expected[2][2] = {{21967.6, -0.10649}, {18818.4, -1.7041}};
  int row = 0;
  for (double frac : {0.25, 0.5}) {
    const double lambda = frac * cc.lambda_star;
    auto ctx = cc.at(lambda);
    auto ls = cc.chain(lambda);
    REQUIRE(ls.below_threshold);
    auto geo = cc_geometry(ctx, ls);
    CHECK(geo.rho == ls.t0);
    CHECK(geo.beta == doctest::Approx(ls.t0 * ls.t0 * ls.R));
    auto u = newton_refine(ctx, mountain_pass(ctx, geo).u.coeffs);
    auto v = ball_minimize(ctx, ls.t0);
    CAPTURE(frac);
    REQUIRE(u.accepted);
    REQUIRE(v.accepted);
    CHECK(u.residual < 1e-8);
    CHECK(v.residual < 1e-8);
    CHECK(u.energy > 0.0);
    CHECK(v.energy < 0.0);
    CHECK(h_norm(ctx.sys(), v.u.coeffs) < ls.t0 - 1e-8);
    CHECK(v.classification == Classification::ball_min);
    CHECK(u.energy == doctest::Approx(expected[row][0]).epsilon(1e-5));
    CHECK(v.energy == doctest::Approx(expected[row][1]).epsilon(1e-4));
    // the boundedness chain holds along the minimization
    auto ps = ps_diagnostics(v.trace, ChainParams{lambda, 1.5, 4.0, cc.ec.cp});
    CHECK(ps.chain_checked);
    CHECK(ps.chain_holds);
    CHECK(ps.chain_violations == 0);
    ++row;
  }
}

TEST_CASE("ball minimum without a concave term is trivial") {
  const auto& run = power_run();
  auto v = ball_minimize(run.ctx, run.geo.rho);
  CHECK_FALSE(v.accepted);
  CHECK(v.classification == Classification::trivial);
  CHECK(v.u.coeffs.norm() == 0.0);
}

TEST_CASE("fountain of the odd power") {
  const auto& run = power_run();
  auto spectral = eig_dense(run.ctx.sys());
  auto recs = fountain_search(run.ctx, spectral, 4);
  REQUIRE(recs.size() >= 6);
  REQUIRE(recs.size() % 2 == 0);
  const double expected[3] = {25241.817, 887392.23, 8248275.1};
  for (std::size_t i = 0; i < recs.size(); i += 2) {
    CHECK(recs[i].accepted);
    CHECK(recs[i].residual < 1e-8);
    CHECK(recs[i + 1].residual < 1e-8);
    CHECK(recs[i].energy > 0.0);
    CHECK(recs[i + 1].energy == doctest::Approx(recs[i].energy).epsilon(1e-12));
    CHECK((recs[i].u.coeffs + recs[i + 1].u.coeffs).norm() <= 1e-12 * recs[i].u.coeffs.norm());
    if (i >= 2) CHECK(recs[i].energy > recs[i - 2].energy);
    if (i / 2 < 3) CHECK(recs[i].energy == doctest::Approx(expected[i / 2]).epsilon(1e-6));
  }
  CHECK(recs.front().energy == doctest::Approx(run.refined.energy).epsilon(1e-9));

  auto betas = beta_sequence(run.ctx.basis(), run.ctx.sys(), spectral, 4.0, 6, 8, 0);
  const double C = growth_constant(power4(), 4.0);
  CHECK(C == doctest::Approx(0.25).epsilon(1e-12));
  auto fc = fountain_constants(betas, 4.0, C, 1.0);
  for (int k = 1; k < 6; ++k) CHECK(fc.gamma[k] > fc.gamma[k - 1]);
  for (int k = 0; k < 6; ++k) {
    CHECK(fc.gamma[k] == doctest::Approx(std::pow(4.0 * C * std::pow(betas[k], 4.0), -0.5)).epsilon(1e-12));
    CHECK(fc.b_bound[k] == doctest::Approx(0.25 * fc.gamma[k] * fc.gamma[k] - C).epsilon(1e-12));
  }
  // for the pure power the ray maximum of the Z_1 maximizer has norm gamma_1
  CHECK(h_norm(run.ctx.sys(), recs.front().u.coeffs) == doctest::Approx(fc.gamma[0]).epsilon(1e-5));

  auto f1ctx = run.ctx.with_forcing(Forcing::from(make_nonlinearity(NlKind::f1_sectional)));
  CHECK(error_of([&] { fountain_search(f1ctx, spectral, 4); }) == Errc::BadParams);
  CHECK(error_of([&] { fountain_search(run.ctx, spectral, 2); }) == Errc::BadParams);
}

TEST_CASE("dual fountain") {
  // on (0, 1) the radii rho_k are below 1e-6; see the notes on domain scale
  auto base = context(10.0, Forcing::from(power4()));
  const double lambda = 0.1;
  auto ctx = base.with_forcing(Forcing::of(power4(), lambda, 1.0, 1.5));
  auto spectral = eig_dense(ctx.sys());
  auto ec = embedding_constants(base, 1.5, 4.0);
  const int kmax = 6;
  auto bp = beta_sequence(ctx.basis(), ctx.sys(), spectral, 1.5, kmax, 8, 0);
  auto dc = dual_constants(bp, lambda, 1.0, 1.5, 4.0, delta_of(power4(), 4.0), ec);
  for (int k = 1; k < kmax; ++k) {
    CHECK(bp[k] < bp[k - 1]);
    CHECK(dc.rho[k] < dc.rho[k - 1]);
    CHECK(dc.d_bound[k] > dc.d_bound[k - 1]);
  }
  for (int k = 0; k < kmax; ++k) {
    CHECK(dc.a_bound[k] >= 0.0);
    CHECK(dc.d_bound[k] == doctest::Approx(-(lambda / 1.5) * std::pow(bp[k], 1.5) * std::pow(dc.R, 1.5)).epsilon(1e-12));
  }
  CHECK(dc.R == doctest::Approx(0.7105).epsilon(1e-3));

  // sampled points of Z_k inside the ball of radius R never go below d_k
  std::mt19937 gen(9);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int k : {1, 3}) {
    auto pair = subspaces(ctx.sys(), spectral, k);
    double lowest = 1e300;
    for (int i = 0; i < 300; ++i) {
      Vector z(pair.Zk.cols());
      for (int j = 0; j < z.size(); ++j) z[j] = n(gen);
      const Vector u = pair.Zk * (z.normalized() * dc.R * unif(gen));
      lowest = std::min(lowest, eval_energy(ctx, u));
    }
    CHECK(lowest >= dc.d_bound[k - 1] - 1e-9);
  }

  std::vector<int> ks{1, 2, 3, 4, 5, 6};
  auto recs = dual_fountain_search(ctx, spectral, ks, dc);
  REQUIRE(recs.size() >= 4);
  const double expected[3] = {-1.5284e-3, -8.212e-6, -3.023e-7};
  for (std::size_t i = 0; i < recs.size(); i += 2) {
    const auto& r = recs[i];
    CAPTURE(i);
    CHECK(r.accepted);
    CHECK(r.residual < 1e-8);
    CHECK(r.energy < 0.0);
    CHECK(recs[i + 1].energy == doctest::Approx(r.energy).epsilon(1e-12));
    CHECK(r.energy >= dc.d_bound[r.k - 1] - 1e-9);
    if (i >= 2) CHECK(r.energy > recs[i - 2].energy);
    if (i / 2 < 3) CHECK(r.energy == doctest::Approx(expected[i / 2]).epsilon(1e-3));
  }
}

TEST_CASE("Palais-Smale monitors") {
  auto ctx = context(1.0, Forcing::from(make_nonlinearity(NlKind::zero)), 16);
  auto spectral = eig_dense(ctx.sys());
  Trace diverging;
  for (int j = 1; j <= 20; ++j) diverging.push_back(trace_point(ctx, j * spectral.efuns[0], j));
  auto ps = ps_diagnostics(diverging);
  CHECK_FALSE(ps.bounded);
  CHECK_FALSE(ps.chain_checked);
  CHECK(ps.max_norm == doctest::Approx(20 * h_norm(ctx.sys(), spectral.efuns[0])));

  Trace flat;
  for (int j = 1; j <= 20; ++j) flat.push_back(trace_point(ctx, spectral.efuns[0] * (1.0 + 1.0 / j), j));
  CHECK(ps_diagnostics(flat).bounded);
}

TEST_CASE("classification names") {
  CHECK(classification_name(Classification::fountain_k, 3) == "fountain_3");
  CHECK(classification_name(Classification::dual_fountain_k, 2) == "dual_fountain_2");
  CHECK(classification_name(Classification::mountain_pass) == "mountain_pass");
  CHECK(classification_name(Classification::ball_min) == "ball_min");
}
