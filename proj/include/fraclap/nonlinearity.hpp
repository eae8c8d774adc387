#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fraclap {

enum class NlKind { power, concave_convex, f1_sectional, f2, f3_logsquare, f4, zero };

std::string_view nl_kind_name(NlKind kind) noexcept;
/// Throws BadParams for an unknown name.
NlKind parse_nl_kind(std::string_view name);

struct NlParams {
  double lambda = 0.0;
  double mu = 1.0;
  double p = 1.5;
  double q = 4.0;
  double T1 = 2.0;
  double a_br = 0.5;  // left seam of the f1 bridge sits at -a_br
  double b_br = 1.0;  // right seam of the f1 bridge sits at +b_br
  double T0 = 3.0;

  bool operator==(const NlParams&) const = default;
};

/// Concave part split off a nonlinearity: f = lambda |t|^{p-2} t + g(t).
struct ConcaveSplit;

/// One entry of the nonlinearity catalog. All members are autonomous in x;
/// the x argument is kept so callers can treat f as f(x, t).
class Nonlinearity {
 public:
  Nonlinearity() = default;

  NlKind kind() const noexcept { return kind_; }
  const NlParams& params() const noexcept { return params_; }
  bool odd_claimed() const noexcept;

  double f(double x, double t) const;
  /// Antiderivative with F(x, 0) = 0.
  double F(double x, double t) const;
  /// d/dt f. Analytic where available, otherwise a centered difference with
  /// step 1e-6 max(1, |t|). Concave terms |t|^{p-2} are evaluated with |t|
  /// clamped below at kDerivativeClamp.
  double ft(double x, double t) const;
  /// True when ft(x, t) hit the |t| clamp of a singular concave term.
  bool ft_clamped(double t) const;
  /// Whether ft uses the finite-difference fallback.
  bool ft_is_fallback() const noexcept;

  /// f = lambda |t|^{p-2} t + g, with lambda = 0 when there is no concave part.
  ConcaveSplit split() const;

  static constexpr double kDerivativeClamp = 1e-8;

  friend Nonlinearity make_nonlinearity(NlKind kind, const NlParams& params);

 private:
  double f_sectional(double t) const;
  double F_sectional(double t) const;
  double fd_derivative(double t) const;

  NlKind kind_ = NlKind::zero;
  NlParams params_{};
  // Precomputed integrals of the two f1 bridges.
  double bridge_left_integral_ = 0.0;
  double bridge_right_integral_ = 0.0;
};

struct ConcaveSplit {
  double lambda = 0.0;
  double p = 1.5;
  Nonlinearity g;
};

/// Validates parameters for the kind and returns the catalog entry.
/// Throws BadParams (e.g. concave_convex needs 1 < p < 2 < q; f1 needs
/// 0 < a_br < b_br < T1).
Nonlinearity make_nonlinearity(NlKind kind, const NlParams& params = {});

/// Outer branch shared by f1 and f3: 2t ln(|t|+1) + t|t|/(|t|+1).
double logsquare_f(double t);
/// u^2 ln(|u|+1).
double logsquare_F(double t);

}  // namespace fraclap
