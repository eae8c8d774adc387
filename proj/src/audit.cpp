#include "fraclap/audit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

constexpr double kMargin = 1e-9;

std::vector<double> magnitudes(double tmax, const AuditOptions& opt) {
  std::vector<double> m;
  const double decades = std::log10(tmax / opt.tmin);
  const int n_log = static_cast<int>(std::floor(decades * opt.per_decade + 1e-9));
  for (int i = 0; i <= n_log; ++i) m.push_back(opt.tmin * std::pow(10.0, double(i) / opt.per_decade));
  for (int k = 1; k <= opt.linear_points; ++k) m.push_back(tmax * k / opt.linear_points);
  m.push_back(tmax);
  std::sort(m.begin(), m.end());
  std::vector<double> out;
  for (double v : m) {
    if (v > tmax) continue;
    if (out.empty() || v > out.back() * (1.0 + 1e-12)) out.push_back(v);
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

HypothesisResult holds(std::string detail) {
  return {Verdict::holds_on_grid, std::nullopt, std::move(detail)};
}

HypothesisResult violated(Witness w, std::string detail) {
  return {Verdict::violated, w, std::move(detail)};
}

// max over 0 < t < s (pairs of magnitudes, same sign) of H(t) - H(s)
struct PairMax {
  double value = 0.0;
  double t = 0.0;
  double s = 0.0;
};

PairMax h4star_on(const Nonlinearity& nl, double x, const std::vector<double>& mags, double sign) {
  PairMax best;
  double prefix = -INFINITY;
  double prefix_t = 0.0;
  for (double m : mags) {
    const double t = sign * m;
    const double H = t * nl.f(x, t) - 2.0 * nl.F(x, t);
    if (prefix > -INFINITY && prefix - H > best.value) best = {prefix - H, prefix_t, t};
    if (H > prefix) {
      prefix = H;
      prefix_t = t;
    }
  }
  return best;
}

}  // namespace

std::vector<double> audit_grid(double tmax, const AuditOptions& options) {
  const auto pos = magnitudes(tmax, options);
  std::vector<double> grid;
  grid.reserve(2 * pos.size());
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) grid.push_back(-*it);
  grid.insert(grid.end(), pos.begin(), pos.end());
  if (grid.size() < 400) {
    throw Error(Errc::GridTooSmall,
                "audit grid has " + std::to_string(grid.size()) + " points, need at least 400");
  }
  return grid;
}

double extract_delta(const Nonlinearity& nl, double eps, double q, double tmax,
                     const AuditOptions& options) {
  if (!(eps > 0.0)) throw Error(Errc::BadParams, "extract_delta needs eps > 0");
  if (!(q > 2.0)) throw Error(Errc::BadParams, "extract_delta needs q > 2");
  const auto grid = audit_grid(tmax, options);
  const double x = options.x;
  auto ratio = [&](double t) {
    return std::max(0.0, std::abs(nl.F(x, t)) - eps * t * t) / std::pow(std::abs(t), q);
  };
  double delta = 0.0;
  for (double t : grid) delta = std::max(delta, ratio(t));

  for (double sign : {-1.0, 1.0}) {
    const double hi = ratio(sign * tmax), hi_in = ratio(sign * tmax / 10.0);
    if (hi > 0.0 && hi > 1.01 * hi_in) {
      throw Error(Errc::Unbounded, "|F|/|t|^q still grows at |t| = " + fmt(tmax));
    }
    const double lo = ratio(sign * options.tmin), lo_in = ratio(sign * options.tmin * 10.0);
    if (lo > 0.0 && lo > 1.01 * lo_in) {
      throw Error(Errc::Unbounded, "|F|/|t|^q still grows as |t| -> 0");
    }
  }
  return delta;
}

AuditReport audit(const Nonlinearity& nl, double q_candidate, double tmax,
                  const AuditOptions& options) {
  if (!(tmax >= 100.0)) throw Error(Errc::BadParams, "audit needs tmax >= 100");
  if (!(q_candidate > 2.0)) throw Error(Errc::BadParams, "audit needs q_candidate > 2");

  AuditReport rep;
  rep.q_candidate = q_candidate;
  rep.tmax = tmax;
  rep.tgrid = audit_grid(tmax, options);
  const auto mags = magnitudes(tmax, options);
  const double x = options.x;
  const double q = q_candidate;
  auto f = [&](double t) { return nl.f(x, t); };
  auto F = [&](double t) { return nl.F(x, t); };

  // (H1): a2 from |t| >= 1, a1 absorbs the rest
  {
    double a2 = 0.0;
    for (double t : rep.tgrid) {
      if (std::abs(t) >= 1.0) a2 = std::max(a2, std::abs(f(t)) / std::pow(std::abs(t), q - 1.0));
    }
    double a1 = 0.0;
    for (double t : rep.tgrid) a1 = std::max(a1, std::abs(f(t)) - a2 * std::pow(std::abs(t), q - 1.0));
    rep.a1 = a1;
    rep.a2 = a2;
    rep.h1 = holds("a1 = " + fmt(a1) + ", a2 = " + fmt(a2));
    for (double sign : {-1.0, 1.0}) {
      const double t = sign * tmax;
      const double hi = std::abs(f(t)) / std::pow(tmax, q - 1.0);
      const double in = std::abs(f(t / 10.0)) / std::pow(tmax / 10.0, q - 1.0);
      if (hi > 0.0 && hi > 1.01 * in) {
        rep.h1 = violated({x, t, NAN, hi - in},
                          "|f|/|t|^(q-1) still grows at the grid edge, no finite (a1, a2)");
        rep.a2 = INFINITY;
        break;
      }
    }
  }

  // (H2)
  {
    double worst = 0.0, worst_t = 0.0;
    for (double t : rep.tgrid) {
      if (std::abs(t) > 1e-3) continue;
      const double r = std::abs(f(t)) / std::abs(t);
      if (r > worst) {
        worst = r;
        worst_t = t;
      }
    }
    if (worst <= 1e-2) {
      rep.h2 = holds("max |f|/|t| on |t| <= 1e-3 is " + fmt(worst));
    } else {
      rep.h2 = violated({x, worst_t, NAN, worst - 1e-2}, "|f|/|t| = " + fmt(worst) + " near 0");
    }
  }

  // (H3): F/t^2 increasing over the last decade and either large or still
  // growing by a non-vanishing amount per decade
  {
    rep.h3 = holds("");
    for (double sign : {-1.0, 1.0}) {
      auto g = [&](double m) { return F(sign * m) / (m * m); };
      bool increasing = true;
      Witness w{x, 0.0, NAN, 0.0};
      double prev = -INFINITY;
      for (double m : mags) {
        if (m < tmax / 10.0) continue;
        const double v = g(m);
        if (v < prev - kMargin * std::max(1.0, std::abs(prev))) {
          increasing = false;
          w = {x, sign * m, NAN, prev - v};
        }
        prev = v;
      }
      const double top = g(tmax), mid = g(tmax / 10.0), low = g(tmax / 100.0);
      const double last = top - mid, before = mid - low;
      const bool large = top > 1e3;
      const bool growing = last > 0.0 && last >= 0.5 * before;
      std::string detail = "F/t^2 at |t| = tmax is " + fmt(top) + ", last-decade growth " + fmt(last);
      if (!increasing) {
        rep.h3 = violated(w, "F/t^2 not increasing over the last decade");
        break;
      }
      if (!(large || growing)) {
        rep.h3 = violated({x, sign * tmax, NAN, mid - top}, detail + " (saturating)");
        break;
      }
      rep.h3.detail = detail;
    }
  }

  // (H4)
  {
    double T0 = 0.0;
    std::optional<Witness> last_bad;
    for (double sign : {-1.0, 1.0}) {
      double prev = NAN, prev_m = 0.0;
      for (double m : mags) {
        const double t = sign * m;
        const double v = f(t) / t;
        if (!std::isnan(prev) && v < prev - 1e-12 * std::max(1.0, std::abs(prev))) {
          T0 = std::max(T0, m);
          last_bad = Witness{x, t, sign * prev_m, prev - v};
        }
        prev = v;
        prev_m = m;
      }
    }
    rep.T0 = T0;
    if (T0 <= tmax / 10.0) {
      rep.h4 = holds("f/t monotone beyond T0 = " + fmt(T0));
    } else {
      rep.h4 = violated(*last_bad, "f/t not monotone over the last grid decade");
    }
  }

  // (H4)*: log-spaced pairs per sign; C* must not keep growing with the range
  {
    const int n = options.h4star_pairs;
    std::vector<double> full, inner;
    for (int i = 0; i < n; ++i) {
      const double m = options.tmin * std::pow(tmax / options.tmin, double(i) / (n - 1));
      full.push_back(m);
      if (m <= tmax / 10.0) inner.push_back(m);
    }
    PairMax best, best_inner;
    for (double sign : {-1.0, 1.0}) {
      const auto a = h4star_on(nl, x, full, sign);
      const auto b = h4star_on(nl, x, inner, sign);
      if (a.value > best.value) best = a;
      best_inner.value = std::max(best_inner.value, b.value);
    }
    rep.C_star = best.value;
    const double tol = kMargin * std::max(1.0, std::abs(best_inner.value));
    if (best.value > 1.01 * best_inner.value + tol) {
      rep.h4_star = violated({x, best.t, best.s, best.value - best_inner.value},
                             "H(t) - H(s) keeps growing with the sampled range");
    } else {
      rep.h4_star = holds("C* = " + fmt(best.value));
    }
  }

  // (AR)
  {
    std::vector<double> zetas{2.1};
    for (double z = 2.5; z < q - 1e-12; z += 0.5) zetas.push_back(z);
    if (q > 2.1) zetas.push_back(q);
    std::optional<Witness> first_failure;
    for (double zeta : zetas) {
      // largest magnitude where either sign fails
      std::optional<Witness> fail;
      double fail_m = 0.0;
      for (double m : mags) {
        for (double sign : {-1.0, 1.0}) {
          const double t = sign * m;
          const double Fv = F(t), tf = t * f(t);
          const double tol = kMargin * std::max(1.0, std::abs(tf));
          double margin = 0.0;
          if (!(zeta * Fv > 0.0)) {
            margin = std::max(tol * 2.0, -zeta * Fv);
          } else if (zeta * Fv - tf > tol) {
            margin = zeta * Fv - tf;
          }
          if (margin > 0.0 && m >= fail_m) {
            fail = Witness{x, t, NAN, margin};
            fail_m = m;
          }
        }
      }
      if (!fail || fail_m < tmax / 10.0) {
        double r = options.tmin;
        if (fail) r = *std::upper_bound(mags.begin(), mags.end(), fail_m);
        rep.zeta = zeta;
        rep.r_ar = r;
      } else if (!first_failure) {
        first_failure = fail;
      }
    }
    if (rep.zeta > 0.0) {
      rep.ar = holds("zeta = " + fmt(rep.zeta) + " for |t| >= " + fmt(rep.r_ar));
    } else {
      rep.ar = violated(*first_failure, "0 < zeta F <= t f fails at the grid edge for every zeta");
    }
  }

  // (S)
  {
    std::optional<Witness> worst;
    for (double m : mags) {
      const double fp = f(m), fm = f(-m);
      const double margin = std::abs(fp + fm);
      if (margin > kMargin * std::max(1.0, std::abs(fp)) && (!worst || margin > worst->margin)) {
        worst = Witness{x, m, NAN, margin};
      }
    }
    rep.s = worst ? violated(*worst, "f(-t) != -f(t)") : holds("f odd on the grid");
  }

  for (double eps : options.eps_set) {
    try {
      rep.delta[eps] = extract_delta(nl, eps, q, tmax, options);
    } catch (const Error& e) {
      if (e.code() != Errc::Unbounded) throw;
    }
  }
  for (double M : options.M_set) {
    double c = 0.0;
    for (double t : rep.tgrid) c = std::max(c, M * t * t - F(t));
    rep.C_M[M] = c;
  }
  return rep;
}

}  // namespace fraclap
