#pragma once

#include <cmath>

#include "fraclap/energy.hpp"

namespace fraclap::testing {

struct TaylorResult {
  double err_coarse = 0.0;
  double err_fine = 0.0;
  double order = 0.0;
  bool exact = false;  // both errors at roundoff: the difference quotient is exact
};

// |g^T S h - (J(u + eps h) - J(u - eps h)) / (2 eps)| at eps = 1e-3 and 1e-4.
inline TaylorResult taylor_test(const EnergyContext& ctx, const Vector& u, const Vector& h) {
  const double exact = grad_h(ctx, u).dot(ctx.sys().S * h);
  const double J = eval_energy(ctx, u);
  auto err = [&](double eps) {
    const double fd = (eval_energy(ctx, u + eps * h) - eval_energy(ctx, u - eps * h)) / (2 * eps);
    return std::abs(exact - fd);
  };
  TaylorResult r;
  r.err_coarse = err(1e-3);
  r.err_fine = err(1e-4);
  const double roundoff = 1e-14 * (std::abs(J) + 1.0) / 1e-3;
  if (r.err_coarse <= 10 * roundoff) {
    r.exact = true;
    r.order = 2.0;
  } else {
    r.order = std::log10(r.err_coarse / r.err_fine);
  }
  return r;
}

}  // namespace fraclap::testing
