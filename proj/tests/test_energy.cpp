#include <cmath>
#include <random>

#include "doctest.h"
#include "fraclap/energy.hpp"
#include "fraclap/error.hpp"
#include "taylor.hpp"

using namespace fraclap;

namespace {

EnergyContext make_ctx(const Nonlinearity& nl, int N = 16, double b = 1.0) {
  auto spec = make_problem(1.5, 0, b, N, 0);
  Basis basis(spec);
  return EnergyContext(assemble(spec, basis), basis, Forcing::from(nl));
}

Nonlinearity catalog(NlKind kind) {
  NlParams p;
  if (kind == NlKind::concave_convex || kind == NlKind::f2 || kind == NlKind::f4) p.lambda = 0.3;
  return make_nonlinearity(kind, p);
}

Vector uniform(int dim, std::mt19937& gen, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = d(gen);
  return v;
}

}  // namespace

TEST_CASE("energy values") {
  auto pw = make_ctx(make_nonlinearity(NlKind::power));
  const Vector z = Vector::Zero(pw.dim());
  CHECK(eval_energy(pw, z) == 0.0);
  CHECK(residual_norm(pw, z) == 0.0);

  std::mt19937 gen(2);
  const Vector u0 = uniform(pw.dim(), gen, -1, 1);
  const double n2 = u0.dot(pw.sys().S * u0);
  const double q4 = std::pow(lq_norm(pw.basis(), u0, 4.0), 4.0);
  for (double t : {1.0, 2.0, 3.0}) {
    CHECK(eval_energy(pw, t * u0) == doctest::Approx(t * t / 2 * n2 - std::pow(t, 4) / 4 * q4).epsilon(1e-12));
  }
  auto zero = pw.with_forcing(Forcing::from(make_nonlinearity(NlKind::zero)));
  CHECK(eval_energy(zero, u0) == doctest::Approx(0.5 * std::pow(h_norm(zero.sys(), u0), 2)).epsilon(1e-14));
  CHECK(residual_norm(zero, u0) == doctest::Approx(h_norm(zero.sys(), u0)).epsilon(1e-12));
  CHECK(pw.refactorization_error() <= 1e-14);
}

TEST_CASE("residual identities") {
  auto ctx = make_ctx(catalog(NlKind::f3_logsquare));
  std::mt19937 gen(4);
  const Vector u = uniform(ctx.dim(), gen, -2, 2);
  const Vector r = residual(ctx, u);
  CHECK((r - (ctx.sys().S * u - load_vector(ctx.basis(), ctx.forcing(), u))).cwiseAbs().maxCoeff() <= 1e-12 * r.norm());
  const Vector g = grad_h(ctx, u);
  CHECK((ctx.sys().S * g - r).norm() <= 1e-10 * r.norm());
  CHECK(residual_norm(ctx, u) == doctest::Approx(std::sqrt(r.dot(g))).epsilon(1e-12));
}

TEST_CASE("gradient order for the whole catalog") {
  for (auto kind : {NlKind::power, NlKind::concave_convex, NlKind::f1_sectional, NlKind::f2,
                    NlKind::f3_logsquare, NlKind::f4, NlKind::zero}) {
    // on (0, 1) the quadratic part is ~1e3 times larger and the eps = 1e-4
    // quotient is at roundoff
    auto ctx = make_ctx(catalog(kind), 16, 10.0);
    std::mt19937 gen(10);
    CAPTURE(nl_kind_name(kind));
    for (int pair = 0; pair < 10; ++pair) {
      // positive u in [0.5, 2] keeps the difference stencil off the |t| kinks
      const Vector u = uniform(ctx.dim(), gen, 0.5, 2.0);
      const Vector h = uniform(ctx.dim(), gen, -4.0, 4.0);
      auto t = testing::taylor_test(ctx, u, h);
      CAPTURE(t.err_coarse);
      CAPTURE(t.err_fine);
      CHECK(t.order >= 1.9);
      CHECK(t.exact == (kind == NlKind::zero));
    }
  }
}

TEST_CASE("Hessian") {
  auto pw = make_ctx(make_nonlinearity(NlKind::power));
  std::mt19937 gen(6);
  const Vector u = uniform(pw.dim(), gen, -1, 1);
  const Vector v = uniform(pw.dim(), gen, -1, 1);
  const Vector w = uniform(pw.dim(), gen, -1, 1);
  const Matrix H = hessian(pw, u);
  CHECK(std::abs(v.dot(H * w) - w.dot(H * v)) <= 1e-10 * std::abs(v.dot(H * w)));
  CHECK((hessian_apply(pw, u, v) - H * v).norm() <= 1e-12 * (H * v).norm());
  const double e = 1e-6;
  const Vector fd = (residual(pw, u + e * v) - residual(pw, u - e * v)) / (2 * e);
  CHECK((fd - H * v).norm() <= 1e-6 * fd.norm());

  auto zero = pw.with_forcing(Forcing::from(make_nonlinearity(NlKind::zero)));
  CHECK((hessian_apply(zero, u, v) - zero.sys().S * v).norm() <= 1e-12 * v.norm() * zero.sys().S.norm());
  NlParams lin;
  lin.q = 2.0;
  auto linear = pw.with_forcing(Forcing::from(make_nonlinearity(NlKind::power, lin)));
  const Vector expect = (linear.sys().S - linear.sys().M) * v;
  CHECK((hessian_apply(linear, u, v) - expect).norm() <= 1e-10 * expect.norm());

  NlParams cc;
  cc.lambda = 0.2;
  auto concave = pw.with_forcing(Forcing::from(make_nonlinearity(NlKind::concave_convex, cc)));
  bool clamped = false;
  hessian(concave, Vector::Zero(pw.dim()), &clamped);
  CHECK(clamped);
}

TEST_CASE("context validation") {
  auto spec = make_problem(1.5, 0, 1, 16, 0);
  Basis basis(spec);
  auto sys = assemble(spec, basis);
  sys.S = -sys.S;
  CHECK_THROWS_AS(EnergyContext(sys, basis, Forcing::from(make_nonlinearity(NlKind::power))), Error);
}
