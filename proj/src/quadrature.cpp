#include "fraclap/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fraclap/error.hpp"

namespace fraclap {

namespace {

// Newton iteration on P_n from the Chebyshev-like initial guess.
QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.5;
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw Error(Errc::BadParams, "Gauss order must be >= 1");
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule gauss_on(double lo, double hi, int n) {
  const auto& ref = gauss_legendre(n);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  const double L = hi - lo;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    rule.nodes.push_back(lo + L * ref.nodes[i]);
    rule.weights.push_back(L * ref.weights[i]);
  }
  return rule;
}

QuadratureRule graded_gauss(double length, int n, double alpha, double grading) {
  if (!(alpha > -1.0)) throw Error(Errc::BadParams, "graded_gauss needs alpha > -1");
  // the innermost cell [0, length * grading^levels] holds a share ~ grading^{levels (alpha+1)}
  const int levels =
      std::max(1, static_cast<int>(std::ceil(std::log(1e-17) / ((alpha + 1.0) * std::log(grading)))));
  const auto& ref = gauss_legendre(n);
  QuadratureRule rule;
  rule.nodes.reserve(ref.size() * (levels + 1));
  rule.weights.reserve(ref.size() * (levels + 1));
  double hi = length;
  for (int level = 0; level <= levels; ++level) {
    const double lo = (level == levels) ? 0.0 : hi * grading;
    const double L = hi - lo;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      rule.nodes.push_back(lo + L * ref.nodes[i]);
      rule.weights.push_back(L * ref.weights[i]);
    }
    hi = lo;
  }
  return rule;
}

}  // namespace fraclap
