#include <cmath>

#include "doctest.h"
#include "fraclap/audit.hpp"
#include "fraclap/error.hpp"

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

Nonlinearity f5(double lambda) {
  NlParams p;
  p.lambda = lambda;
  return make_nonlinearity(NlKind::concave_convex, p);
}

}  // namespace

TEST_CASE("grid shape") {
  auto grid = audit_grid(1e8);
  CHECK(grid.size() >= 400);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(grid.front() == doctest::Approx(-1e8));
  CHECK(grid.back() == doctest::Approx(1e8));
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(grid[i] == -grid[grid.size() - 1 - i]);
  AuditOptions sparse;
  sparse.per_decade = 2;
  sparse.linear_points = 10;
  CHECK(error_of([&] { audit_grid(1e3, sparse); }) == Errc::GridTooSmall);
}

TEST_CASE("audit preconditions") {
  auto nl = make_nonlinearity(NlKind::power);
  CHECK(error_of([&] { audit(nl, 4.0, 50.0); }) == Errc::BadParams);
  CHECK(error_of([&] { audit(nl, 2.0, 1e3); }) == Errc::BadParams);
}

TEST_CASE("pure power satisfies everything") {
  auto rep = audit(f5(0.0), 4.0, 1e8);
  CHECK(rep.h1.holds());
  CHECK(rep.h2.holds());
  CHECK(rep.h3.holds());
  CHECK(rep.h4.holds());
  CHECK(rep.h4_star.holds());
  CHECK(rep.ar.holds());
  CHECK(rep.s.holds());
  CHECK(rep.zeta == doctest::Approx(4.0));
  CHECK(rep.a2 == doctest::Approx(1.0).epsilon(1e-9));
  for (const auto& [eps, delta] : rep.delta) CHECK(delta == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("f1 fails symmetry and AR with witnesses") {
  auto rep = audit(make_nonlinearity(NlKind::f1_sectional), 4.0, 1e8);
  REQUIRE_FALSE(rep.s.holds());
  REQUIRE(rep.s.witness);
  auto nl = make_nonlinearity(NlKind::f1_sectional);
  const double t = rep.s.witness->t;
  CHECK(std::abs(nl.f(0, -t) + nl.f(0, t)) > 1e-9);
  REQUIRE_FALSE(rep.ar.holds());
  REQUIRE(rep.ar.witness);
  CHECK(rep.zeta == 0.0);
}

TEST_CASE("F3 fails AR but passes H3 and S") {
  auto nl = make_nonlinearity(NlKind::f3_logsquare);
  auto rep = audit(nl, 4.0, 1e8);
  CHECK_FALSE(rep.ar.holds());
  REQUIRE(rep.ar.witness);
  const double t = rep.ar.witness->t;
  // at zeta = 2.1 the failure is real: zeta F > t f or F <= 0
  CHECK((2.1 * nl.F(0, t) > t * nl.f(0, t) || nl.F(0, t) <= 0));
  CHECK(rep.h3.holds());
  CHECK(rep.s.holds());
}

TEST_CASE("f5 with a concave part") {
  auto rep = audit(f5(0.1), 4.0, 1e8);
  CHECK(rep.ar.holds());
  CHECK(rep.zeta == doctest::Approx(4.0));
  CHECK(rep.s.holds());
  // |f|/|t| ~ lambda |t|^{-1/2} blows up at 0
  CHECK_FALSE(rep.h2.holds());
}

TEST_CASE("delta(eps)") {
  auto pw = make_nonlinearity(NlKind::power);
  for (double eps : {1e-6, 0.1, 1.0}) CHECK(extract_delta(pw, eps, 4.0, 1e8) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(extract_delta(make_nonlinearity(NlKind::zero), 0.1, 4.0, 1e8) == 0.0);

  auto f3 = make_nonlinearity(NlKind::f3_logsquare);
  const double d = extract_delta(f3, 0.01, 3.0, 1e3);
  CHECK(d > 0.0);
  CHECK(std::isfinite(d));
  CHECK(d == doctest::Approx(0.865149).epsilon(1e-5));
  // soundness on the grid
  for (double t : audit_grid(1e3)) {
    CHECK(std::abs(f3.F(0, t)) <= 0.01 * t * t + d * std::pow(std::abs(t), 3.0) * (1 + 1e-12));
  }
  double last = 1e300;
  for (double eps : {0.001, 0.01, 0.1, 1.0}) {
    const double v = extract_delta(f3, eps, 3.0, 1e3);
    CHECK(v <= last);
    last = v;
  }
}

TEST_CASE("delta is unbounded below the growth exponent") {
  auto pw = make_nonlinearity(NlKind::power);
  CHECK(error_of([&] { extract_delta(pw, 0.1, 3.0, 1e8); }) == Errc::Unbounded);
}

TEST_CASE("H1 fit is sound") {
  for (auto kind : {NlKind::power, NlKind::f3_logsquare, NlKind::f4}) {
    auto nl = make_nonlinearity(kind);
    auto rep = audit(nl, 4.0, 1e8);
    REQUIRE(rep.h1.holds());
    for (double t : rep.tgrid) {
      const double rhs = rep.a1 + rep.a2 * std::pow(std::abs(t), 3.0);
      CHECK(rhs - std::abs(nl.f(0, t)) >= -1e-12 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("audits are deterministic") {
  auto nl = make_nonlinearity(NlKind::f1_sectional);
  auto a = audit(nl, 4.0, 1e8);
  auto b = audit(nl, 4.0, 1e8);
  CHECK(a.delta == b.delta);
  CHECK(a.C_M == b.C_M);
  CHECK(a.C_star == b.C_star);
  CHECK(a.ar.witness->t == b.ar.witness->t);
}
