#pragma once

#include "fraclap/nonlinearity.hpp"

namespace fraclap {

/// f_{lambda,mu}(x, t) = lambda |t|^{p-2} t + mu g(x, t), with antiderivative
/// (lambda / p) |t|^p + mu G(x, t). lambda = 0, mu = 1 gives back g.
struct Forcing {
  double lambda = 0.0;
  double mu = 1.0;
  double p = 1.5;
  Nonlinearity g;

  /// Splits the concave part out of nl (see Nonlinearity::split).
  static Forcing from(const Nonlinearity& nl);
  static Forcing of(const Nonlinearity& g, double lambda, double mu, double p);

  double f(double x, double t) const;
  double F(double x, double t) const;
  double ft(double x, double t) const;
  bool ft_clamped(double t) const;
  bool odd() const { return g.odd_claimed(); }
};

}  // namespace fraclap
