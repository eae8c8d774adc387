#include <algorithm>
#include <cmath>
#include <random>

#include "fraclap/error.hpp"
#include "fraclap/solvers.hpp"

namespace fraclap {

namespace {

// Scales v to the maximum of t -> J(t v), t > 0. Returns false when J keeps
// increasing along the ray.
bool ray_maximum(const EnergyContext& ctx, Vector& v) {
  auto phi = [&](double t) { return eval_energy(ctx, t * v); };
  double t = 1.0;
  double f = phi(t);
  // shrink until the ray is still rising at t
  for (int i = 0; i < 60 && phi(0.5 * t) > f; ++i) {
    t *= 0.5;
    f = phi(t);
  }
  int i = 0;
  for (; i < 80; ++i) {
    const double f2 = phi(2.0 * t);
    if (f2 < f) break;
    t *= 2.0;
    f = f2;
  }
  if (i == 80) return false;
  // golden section on [t/2, 2t]
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.5 * t;
  double hi = 2.0 * t;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  for (int k = 0; k < 80; ++k) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = phi(x2);
    }
  }
  v *= 0.5 * (lo + hi);
  return true;
}

bool distinct(const AssembledSystem& sys, const std::vector<SolutionRecord>& found, const Vector& v,
              double tol) {
  for (const auto& r : found) {
    const Vector& w = r.u.coeffs;
    const double scale = h_norm(sys, w);
    const double d = std::min(h_norm(sys, Vector(v - w)), h_norm(sys, Vector(v + w)));
    if (d <= tol * scale) return false;
  }
  return true;
}

SolutionRecord mirror(const EnergyContext& ctx, const SolutionRecord& rec) {
  SolutionRecord neg = rec;
  neg.u.coeffs = -rec.u.coeffs;
  neg.energy = eval_energy(ctx, neg.u.coeffs);
  neg.residual = residual_norm(ctx, neg.u.coeffs);
  neg.accepted = rec.accepted && neg.residual < std::max(1e-8, 10.0 * rec.residual);
  return neg;
}

std::vector<SolutionRecord> with_mirrors(const EnergyContext& ctx,
                                         const std::vector<SolutionRecord>& found) {
  std::vector<SolutionRecord> out;
  for (const auto& r : found) {
    out.push_back(r);
    out.push_back(mirror(ctx, r));
  }
  return out;
}

}  // namespace

std::vector<SolutionRecord> fountain_search(const EnergyContext& ctx, const SpectralData& spectral,
                                            int k_max, const FountainOptions& options) {
  const auto& sys = ctx.sys();
  if (!ctx.forcing().odd()) throw Error(Errc::BadParams, "fountain search needs an odd nonlinearity");
  if (k_max < 3 || k_max > spectral.count()) throw Error(Errc::BadParams, "fountain search needs 3 <= k_max <= count");
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<SolutionRecord> found;
  for (int k = 1; k <= k_max; ++k) {
    const auto pair = subspaces(sys, spectral, k);
    const int width = std::min<int>(4, static_cast<int>(pair.Zk.cols()));
    for (int sidx = 0; sidx < options.seeds_per_k; ++sidx) {
      Vector z = Vector::Zero(pair.Zk.cols());
      z[0] = 1.0;
      if (sidx > 0) {
        for (int c = 0; c < width; ++c) z[c] += 0.3 * normal(rng);
      }
      Vector v = pair.Zk * z;
      v /= h_norm(sys, v);
      if (!ray_maximum(ctx, v)) continue;
      SolutionRecord rec;
      try {
        rec = newton_refine(ctx, v, options.tol);
      } catch (const Error&) {
        continue;
      }
      if (!rec.accepted || h_norm(sys, rec.u.coeffs) <= 1e-6) continue;
      if (!distinct(sys, found, rec.u.coeffs, options.distinct_tol)) continue;
      Eigen::Index i = 0;
      rec.u.coeffs.cwiseAbs().maxCoeff(&i);
      if (rec.u.coeffs[i] < 0.0) rec.u.coeffs = -rec.u.coeffs;
      rec.solver = "fountain";
      rec.classification = Classification::fountain_k;
      rec.k = k;
      rec.seed = options.seed;
      found.push_back(std::move(rec));
    }
  }
  std::sort(found.begin(), found.end(),
            [](const SolutionRecord& a, const SolutionRecord& b) { return a.energy < b.energy; });
  if (found.size() < 2) {
    throw Error(Errc::InsufficientSolutions,
                "found " + std::to_string(found.size()) + " distinct solution pairs");
  }
  return with_mirrors(ctx, found);
}

std::vector<SolutionRecord> dual_fountain_search(const EnergyContext& ctx,
                                                 const SpectralData& spectral,
                                                 const std::vector<int>& k_range,
                                                 const DualConstants& constants,
                                                 const FountainOptions& options) {
  const auto& sys = ctx.sys();
  if (!ctx.forcing().odd()) throw Error(Errc::BadParams, "dual fountain search needs an odd nonlinearity");
  std::vector<SolutionRecord> found;
  for (int k : k_range) {
    if (k < 1 || k > spectral.count() || k > static_cast<int>(constants.rho.size())) {
      throw Error(Errc::BadParams, "dual fountain index out of range: " + std::to_string(k));
    }
    const double rho = constants.rho[k - 1];
    const auto pair = subspaces(sys, spectral, k);
    Vector z = Vector::Zero(pair.Zk.cols());
    double t = 0.5 * rho;
    bool negative = false;
    for (int i = 0; i < 80 && !negative; ++i, t *= 0.5) {
      z.setZero();
      z[0] = t;
      negative = eval_energy(ctx, pair.Zk * z) < 0.0;
    }
    if (!negative) continue;
    DescentOptions dopt;
    dopt.tol = options.tol;
    const BallMinimum bm = projected_descent(ctx, &pair.Zk, rho, z, dopt);
    if (bm.on_boundary) {
      throw Error(Errc::BoundaryMinimizer, "minimizer over Z_" + std::to_string(k) + " lies on the sphere");
    }
    SolutionRecord rec = newton_refine(ctx, bm.u, options.tol);
    const double n = h_norm(sys, rec.u.coeffs);
    if (n > 1.1 * rho) {
      throw Error(Errc::NotCritical, "refined point for k = " + std::to_string(k) + " left the ball");
    }
    if (!rec.accepted || n <= 1e-12 || !(rec.energy < 0.0)) continue;
    if (!distinct(sys, found, rec.u.coeffs, options.distinct_tol)) continue;
    Eigen::Index i = 0;
    rec.u.coeffs.cwiseAbs().maxCoeff(&i);
    if (rec.u.coeffs[i] < 0.0) rec.u.coeffs = -rec.u.coeffs;
    rec.solver = "dual_fountain";
    rec.classification = Classification::dual_fountain_k;
    rec.k = k;
    rec.seed = options.seed;
    Trace trace = bm.trace;
    for (auto tp : rec.trace) {
      tp.iter += bm.iterations + 1;
      trace.push_back(tp);
    }
    rec.trace = std::move(trace);
    rec.iterations += bm.iterations;
    found.push_back(std::move(rec));
  }
  return with_mirrors(ctx, found);
}

}  // namespace fraclap
