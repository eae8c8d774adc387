#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/nonlinearity.hpp"

namespace fraclap {

enum class Verdict { holds_on_grid, violated };

/// A sample where a defining inequality fails. `s` is the second point of a
/// pair-based check (H4*), NaN otherwise.
struct Witness {
  double x = 0.0;
  double t = 0.0;
  double s = std::numeric_limits<double>::quiet_NaN();
  double margin = 0.0;
};

struct HypothesisResult {
  Verdict verdict = Verdict::holds_on_grid;
  std::optional<Witness> witness;
  std::string detail;

  bool holds() const { return verdict == Verdict::holds_on_grid; }
};

struct AuditOptions {
  double tmin = 1e-6;
  int per_decade = 20;
  int linear_points = 200;
  double x = 0.0;  // the catalog is autonomous, a single x suffices
  std::vector<double> eps_set{0.5, 0.25, 0.1, 0.05, 0.01};
  std::vector<double> M_set{1.0, 10.0, 100.0};
  int h4star_pairs = 200;
};

struct AuditReport {
  double q_candidate = 0.0;
  double tmax = 0.0;
  std::vector<double> tgrid;  // symmetric, sorted

  HypothesisResult h1, h2, h3, h4, h4_star, ar, s;

  double a1 = 0.0;
  double a2 = 0.0;
  std::map<double, double> delta;  // eps -> delta(eps); absent when unbounded
  std::map<double, double> C_M;    // M -> C_M
  double C_star = 0.0;
  double T0 = 0.0;
  double zeta = 0.0;  // largest tested zeta for which (AR) holds, 0 if none
  double r_ar = 0.0;
};

/// Symmetric sample grid: log-spaced magnitudes from tmin to tmax plus a
/// linear grid on (0, tmax], mirrored to negative t. Throws GridTooSmall if
/// it has fewer than 400 points.
std::vector<double> audit_grid(double tmax, const AuditOptions& options = {});

/// Grid certification of (H1)-(H4), (H4)*, (AR) and (S) for nl.
/// Requires tmax >= 100 and q_candidate > 2 (BadParams otherwise).
AuditReport audit(const Nonlinearity& nl, double q_candidate, double tmax,
                  const AuditOptions& options = {});

/// delta(eps) = max over the grid of (|F| - eps t^2)_+ / |t|^q.
/// Throws Unbounded when that ratio still grows towards either grid edge.
double extract_delta(const Nonlinearity& nl, double eps, double q, double tmax,
                     const AuditOptions& options = {});

}  // namespace fraclap
