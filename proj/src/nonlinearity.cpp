#include "fraclap/nonlinearity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fraclap/error.hpp"
#include "fraclap/forcing.hpp"

namespace fraclap {

namespace {

constexpr std::array<std::pair<NlKind, std::string_view>, 7> kKindNames{{
    {NlKind::power, "power"},
    {NlKind::concave_convex, "concave_convex"},
    {NlKind::f1_sectional, "f1_sectional"},
    {NlKind::f2, "f2"},
    {NlKind::f3_logsquare, "f3_logsquare"},
    {NlKind::f4, "f4"},
    {NlKind::zero, "zero"},
}};

// lambda |t|^{p-2} t written so that t = 0 gives 0 without a 0 * inf.
double signed_pow(double t, double exponent) {
  return std::copysign(std::pow(std::abs(t), exponent), t);
}

double logsquare_ft(double t) {
  const double a = std::abs(t);
  return 2.0 * std::log1p(a) + 2.0 * a / (a + 1.0) + (a * a + 2.0 * a) / ((a + 1.0) * (a + 1.0));
}

// Cubic Hermite interpolant of logsquare_f on [x0, x1] matching value and slope.
struct Hermite {
  double x0, x1, y0, y1, d0, d1;

  static Hermite of_logsquare(double x0, double x1) {
    return {x0, x1, logsquare_f(x0), logsquare_f(x1), logsquare_ft(x0), logsquare_ft(x1)};
  }

  double length() const { return x1 - x0; }

  double value(double t) const {
    const double L = length();
    const double s = (t - x0) / L;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * L * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * L * d1;
  }

  // integral from x0 to t
  double integral(double t) const {
    const double L = length();
    const double s = (t - x0) / L;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    return L * ((s4 / 2 - s3 + s) * y0 + (s4 / 4 - 2 * s3 / 3 + s2 / 2) * L * d0 +
                (-s4 / 2 + s3) * y1 + (s4 / 4 - s3 / 3) * L * d1);
  }
};

double concave_ft(double lambda, double p, double t) {
  const double a = std::max(std::abs(t), Nonlinearity::kDerivativeClamp);
  return lambda * (p - 1.0) * std::pow(a, p - 2.0);
}

}  // namespace

double logsquare_f(double t) {
  const double a = std::abs(t);
  return 2.0 * t * std::log1p(a) + t * a / (a + 1.0);
}

double logsquare_F(double t) { return t * t * std::log1p(std::abs(t)); }

std::string_view nl_kind_name(NlKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

NlKind parse_nl_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(Errc::BadParams, "unknown nonlinearity kind '" + std::string(name) + "'");
}

Nonlinearity make_nonlinearity(NlKind kind, const NlParams& params) {
  auto bad = [](const std::string& msg) { throw Error(Errc::BadParams, msg); };
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(params.lambda) || !finite(params.mu) || !finite(params.p) || !finite(params.q)) {
    bad("non-finite nonlinearity parameter");
  }
  auto check_branches = [&] {
    if (!(params.a_br > 0.0 && params.a_br < params.b_br && params.b_br < params.T1)) {
      bad("f1 needs 0 < a_br < b_br < T1");
    }
  };
  switch (kind) {
    case NlKind::power:
      if (!(params.q > 1.0)) bad("power needs q > 1");
      break;
    case NlKind::concave_convex:
      if (!(params.p > 1.0 && params.p < 2.0 && params.q > 2.0)) {
        bad("concave_convex needs 1 < p < 2 < q");
      }
      break;
    case NlKind::f1_sectional:
      check_branches();
      break;
    case NlKind::f2:
      check_branches();
      if (params.lambda < 0.0) bad("f2 needs lambda >= 0");
      break;
    case NlKind::f4:
      if (params.lambda < 0.0) bad("f4 needs lambda >= 0");
      break;
    case NlKind::f3_logsquare:
    case NlKind::zero:
      break;
  }

  Nonlinearity nl;
  nl.kind_ = kind;
  nl.params_ = params;
  if (kind == NlKind::f1_sectional || kind == NlKind::f2) {
    const auto left = Hermite::of_logsquare(-params.T1, -params.a_br);
    const auto right = Hermite::of_logsquare(params.b_br, params.T1);
    nl.bridge_left_integral_ = left.integral(left.x1);
    nl.bridge_right_integral_ = right.integral(right.x1);
  }
  return nl;
}

bool Nonlinearity::odd_claimed() const noexcept {
  return kind_ != NlKind::f1_sectional && kind_ != NlKind::f2;
}

double Nonlinearity::f_sectional(double t) const {
  const auto& P = params_;
  if (t <= -P.T1 || t >= P.T1 || (t >= -P.a_br && t <= P.b_br)) return logsquare_f(t);
  if (t < 0.0) return Hermite::of_logsquare(-P.T1, -P.a_br).value(t);
  return Hermite::of_logsquare(P.b_br, P.T1).value(t);
}

double Nonlinearity::F_sectional(double t) const {
  const auto& P = params_;
  if (t >= -P.a_br && t <= P.b_br) return logsquare_F(t);
  if (t > 0.0) {
    const double base = logsquare_F(P.b_br);
    if (t < P.T1) return base + Hermite::of_logsquare(P.b_br, P.T1).integral(t);
    return base + bridge_right_integral_ + logsquare_F(t) - logsquare_F(P.T1);
  }
  const double base = logsquare_F(-P.a_br);
  if (t > -P.T1) {
    const auto left = Hermite::of_logsquare(-P.T1, -P.a_br);
    return base - (bridge_left_integral_ - left.integral(t));
  }
  return base - bridge_left_integral_ + logsquare_F(t) - logsquare_F(-P.T1);
}

double Nonlinearity::f(double /*x*/, double t) const {
  const auto& P = params_;
  switch (kind_) {
    case NlKind::power: return P.mu * signed_pow(t, P.q - 1.0);
    case NlKind::concave_convex:
      return P.lambda * signed_pow(t, P.p - 1.0) + P.mu * signed_pow(t, P.q - 1.0);
    case NlKind::f1_sectional: return f_sectional(t);
    case NlKind::f2: return P.lambda * signed_pow(t, 0.5) + f_sectional(t);
    case NlKind::f3_logsquare: return logsquare_f(t);
    case NlKind::f4: return 1.5 * P.lambda * signed_pow(t, 0.5) + logsquare_f(t);
    case NlKind::zero: return 0.0;
  }
  return 0.0;
}

double Nonlinearity::F(double /*x*/, double t) const {
  const auto& P = params_;
  const double a = std::abs(t);
  switch (kind_) {
    case NlKind::power: return P.mu * std::pow(a, P.q) / P.q;
    case NlKind::concave_convex:
      return P.lambda * std::pow(a, P.p) / P.p + P.mu * std::pow(a, P.q) / P.q;
    case NlKind::f1_sectional: return F_sectional(t);
    case NlKind::f2: return (2.0 * P.lambda / 3.0) * std::pow(a, 1.5) + F_sectional(t);
    case NlKind::f3_logsquare: return logsquare_F(t);
    case NlKind::f4: return P.lambda * std::pow(a, 1.5) + logsquare_F(t);
    case NlKind::zero: return 0.0;
  }
  return 0.0;
}

double Nonlinearity::fd_derivative(double t) const {
  const double step = 1e-6 * std::max(1.0, std::abs(t));
  return (f(0.0, t + step) - f(0.0, t - step)) / (2.0 * step);
}

double Nonlinearity::ft(double x, double t) const {
  const auto& P = params_;
  switch (kind_) {
    case NlKind::power:
      if (P.q < 2.0) return concave_ft(P.mu, P.q, t);
      return P.mu * (P.q - 1.0) * std::pow(std::abs(t), P.q - 2.0);
    case NlKind::concave_convex:
      return concave_ft(P.lambda, P.p, t) + P.mu * (P.q - 1.0) * std::pow(std::abs(t), P.q - 2.0);
    case NlKind::f1_sectional: return fd_derivative(t);
    case NlKind::f2: {
      // the finite difference would straddle the |t|^{1/2} kink near 0
      const double step = 1e-6 * std::max(1.0, std::abs(t));
      const double sectional = (f_sectional(t + step) - f_sectional(t - step)) / (2.0 * step);
      return concave_ft(P.lambda, 1.5, t) + sectional;
    }
    case NlKind::f3_logsquare: return logsquare_ft(t);
    case NlKind::f4: return concave_ft(1.5 * P.lambda, 1.5, t) + logsquare_ft(t);
    case NlKind::zero: return 0.0;
  }
  (void)x;
  return 0.0;
}

bool Nonlinearity::ft_clamped(double t) const {
  if (std::abs(t) >= kDerivativeClamp) return false;
  switch (kind_) {
    case NlKind::power: return params_.q < 2.0 && params_.mu != 0.0;
    case NlKind::concave_convex:
    case NlKind::f2:
    case NlKind::f4: return params_.lambda != 0.0;
    default: return false;
  }
}

bool Nonlinearity::ft_is_fallback() const noexcept {
  return kind_ == NlKind::f1_sectional || kind_ == NlKind::f2;
}

ConcaveSplit Nonlinearity::split() const {
  const auto& P = params_;
  switch (kind_) {
    case NlKind::concave_convex: {
      NlParams g = P;
      g.lambda = 0.0;
      return {P.lambda, P.p, make_nonlinearity(NlKind::power, g)};
    }
    case NlKind::f2: {
      NlParams g = P;
      g.lambda = 0.0;
      return {P.lambda, 1.5, make_nonlinearity(NlKind::f1_sectional, g)};
    }
    case NlKind::f4:
      return {1.5 * P.lambda, 1.5, make_nonlinearity(NlKind::f3_logsquare, {})};
    default:
      return {0.0, P.p, *this};
  }
}

Forcing Forcing::from(const Nonlinearity& nl) {
  auto split = nl.split();
  return {split.lambda, 1.0, split.p, std::move(split.g)};
}

Forcing Forcing::of(const Nonlinearity& g, double lambda, double mu, double p) {
  if (lambda != 0.0 && !(p > 1.0 && p < 2.0)) {
    throw Error(Errc::BadExponents, "concave exponent p must lie in (1, 2)");
  }
  return {lambda, mu, p, g};
}

double Forcing::f(double x, double t) const {
  const double concave = lambda == 0.0 ? 0.0 : lambda * signed_pow(t, p - 1.0);
  return concave + mu * g.f(x, t);
}

double Forcing::F(double x, double t) const {
  const double concave = lambda == 0.0 ? 0.0 : lambda * std::pow(std::abs(t), p) / p;
  return concave + mu * g.F(x, t);
}

double Forcing::ft(double x, double t) const {
  const double concave = lambda == 0.0 ? 0.0 : concave_ft(lambda, p, t);
  return concave + mu * g.ft(x, t);
}

bool Forcing::ft_clamped(double t) const {
  return (lambda != 0.0 && std::abs(t) < Nonlinearity::kDerivativeClamp) ||
         (mu != 0.0 && g.ft_clamped(t));
}

}  // namespace fraclap
