#pragma once

#include <functional>

#include "fraclap/basis.hpp"
#include "fraclap/forcing.hpp"
#include "fraclap/problem.hpp"

namespace fraclap {

/// Galerkin matrices of the discrete space.
///   S_ij = <phi_i, phi_j>, the Gagliardo form of D phi over R x R,
///   M_ij = int phi_i phi_j,
///   G_ij = int D phi_i D phi_j (only used for the full H^s norm).
struct AssembledSystem {
  ProblemSpec spec;
  Matrix S;
  Matrix M;
  Matrix G;
  int quad_regular = 0;
  int quad_singular = 0;

  int dim() const { return static_cast<int>(S.rows()); }
};

/// w(x) = int_{R \ (a,b)} |x - y|^{-(1+2 sigma)} dy
///      = ((x-a)^{-2 sigma} + (b-x)^{-2 sigma}) / (2 sigma).
/// Throws OutsideDomain unless a < x < b.
double tail_weight(const ProblemSpec& spec, double x);

/// Assembles S, M, G. The Omega x Omega part of S is integrated over element
/// pairs: separated pairs by tensor Gauss, touching pairs in Duffy
/// coordinates and identical pairs in (x - y, y) coordinates, both graded
/// towards the singular point. The exterior part is 2 int Dphi_i Dphi_j w.
/// Throws QuadratureBreakdown on a non-finite diagonal-pair integral.
AssembledSystem assemble(const ProblemSpec& spec, const Basis& basis);

double h_norm(const AssembledSystem& sys, const Vector& u);
double l2_norm(const AssembledSystem& sys, const Vector& u);
/// (|u|^2_2 + 2 |Du|^2_2 + ||u||^2)^{1/2}, the full H^s(R) norm.
double full_norm(const AssembledSystem& sys, const Vector& u);
/// Composite Gauss (order quad_regular) of |u|^q over the elements.
double lq_norm(const Basis& basis, const Vector& u, double q);

/// b_i = int f_{lambda,mu}(x, u(x)) phi_i(x) dx by element Gauss of order
/// quad_regular. Throws NonFiniteIntegrand.
Vector load_vector(const Basis& basis, const Forcing& forcing, const Vector& u);
/// Convenience form: the concave exponent is nl.params().p.
Vector load_vector(const Basis& basis, const Nonlinearity& nl, const Vector& u,
                   double lambda = 0.0, double mu = 1.0);

/// int F_{lambda,mu}(x, u(x)) dx.
double potential_integral(const Basis& basis, const Forcing& forcing, const Vector& u);

/// (M_f)_ij = int d_t f(x, u) phi_i phi_j. Sets *clamped when a singular
/// concave derivative was clamped at some quadrature point.
Matrix derivative_mass(const Basis& basis, const Forcing& forcing, const Vector& u,
                       bool* clamped = nullptr);

/// |u|_q^q and its gradient q int |u|^{q-2} u phi_i.
std::pair<double, Vector> lq_power_gradient(const Basis& basis, const Vector& u, double q);

/// L2 projection of a function onto the spline space.
Vector project(const AssembledSystem& sys, const Basis& basis, const std::function<double(double)>& fn);

/// Discrete best constant c_q = max{|u|_q : ||u|| = 1} by projected gradient
/// ascent on the S-sphere from `restarts` seeded random starts.
/// Throws NoConvergence if the best start fails the first-order test.
double estimate_embedding_constant(const AssembledSystem& sys, const Basis& basis, double q,
                                   int restarts);

}  // namespace fraclap
