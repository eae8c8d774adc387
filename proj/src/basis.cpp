#include "fraclap/basis.hpp"

#include <algorithm>
#include <cmath>

namespace fraclap {

Basis::Basis(const ProblemSpec& spec) : spec_(spec), dim_(spec.dim()), h_(spec.h()) {}

Basis build_basis(const ProblemSpec& spec) { return Basis(spec); }

int Basis::element_of(double x) const {
  const int e = static_cast<int>(std::floor((x - spec_.a) / h_));
  return std::clamp(e, 0, spec_.N - 1);
}

std::pair<int, int> Basis::active(int e) const {
  return {std::max(0, e - 3), std::min(e, dim_ - 1)};
}

double Basis::piece_value(int k, double xi) {
  const double t = k + xi;
  switch (k) {
    case 0: return t * t * t / 6.0;
    case 1: return (-3.0 * t * t * t + 12.0 * t * t - 12.0 * t + 4.0) / 6.0;
    case 2: return (3.0 * t * t * t - 24.0 * t * t + 60.0 * t - 44.0) / 6.0;
    case 3: {
      const double r = 4.0 - t;
      return r * r * r / 6.0;
    }
    default: return 0.0;
  }
}

double Basis::piece_deriv(int k, double xi) {
  const double t = k + xi;
  switch (k) {
    case 0: return t * t / 2.0;
    case 1: return (-3.0 * t * t + 8.0 * t - 4.0) / 2.0;
    case 2: return (3.0 * t * t - 16.0 * t + 20.0) / 2.0;
    case 3: {
      const double r = 4.0 - t;
      return -r * r / 2.0;
    }
    default: return 0.0;
  }
}

double Basis::piece_deriv2(int k, double xi) {
  const double t = k + xi;
  switch (k) {
    case 0: return t;
    case 1: return -3.0 * t + 4.0;
    case 2: return 3.0 * t - 8.0;
    case 3: return 4.0 - t;
    default: return 0.0;
  }
}

double Basis::piece_deriv3(int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return -3.0;
    case 2: return 3.0;
    case 3: return -1.0;
    default: return 0.0;
  }
}

template <int Order>
double Basis::reference(int j, double x) const {
  if (j < 0 || j >= dim_) return 0.0;
  const double t = (x - knot(j)) / h_;
  if (!(t > 0.0 && t < 4.0)) return 0.0;
  const int k = std::min(3, static_cast<int>(t));
  const double xi = t - k;
  if constexpr (Order == 0) return piece_value(k, xi);
  if constexpr (Order == 1) return piece_deriv(k, xi) / h_;
  return piece_deriv2(k, xi) / (h_ * h_);
}

double Basis::value(int j, double x) const { return reference<0>(j, x); }
double Basis::deriv(int j, double x) const { return reference<1>(j, x); }
double Basis::deriv2(int j, double x) const { return reference<2>(j, x); }

double Basis::eval(const Vector& coeffs, double x) const {
  const auto [first, last] = active(element_of(x));
  double sum = 0.0;
  for (int j = first; j <= last; ++j) sum += coeffs[j] * value(j, x);
  return sum;
}

double Basis::eval_deriv(const Vector& coeffs, double x) const {
  const auto [first, last] = active(element_of(x));
  double sum = 0.0;
  for (int j = first; j <= last; ++j) sum += coeffs[j] * deriv(j, x);
  return sum;
}

}  // namespace fraclap
