#include "fraclap/sphere_search.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fraclap/error.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

namespace {

// |u|_q^q restricted to span(B), sampled at the element Gauss points.
class LqOnSpan {
 public:
  LqOnSpan(const Basis& basis, const Matrix& B, double q) : q_(q) {
    const auto& rule = gauss_legendre(basis.spec().quad_regular);
    const int npts = basis.elements() * static_cast<int>(rule.size());
    Matrix P = Matrix::Zero(npts, basis.dim());
    w_.resize(npts);
    int row = 0;
    for (int e = 0; e < basis.elements(); ++e) {
      const auto [first, last] = basis.active(e);
      for (std::size_t k = 0; k < rule.size(); ++k, ++row) {
        w_[row] = rule.weights[k] * basis.h();
        for (int j = first; j <= last; ++j) P(row, j) = Basis::piece_value(e - j, rule.nodes[k]);
      }
    }
    V_ = P * B;
  }

  int dim() const { return static_cast<int>(V_.cols()); }

  double value(const Vector& z) const {
    const Vector u = V_ * z;
    double g = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) g += w_[i] * std::pow(std::abs(u[i]), q_);
    return g;
  }

  Vector gradient(const Vector& z, double* g_out) const {
    const Vector u = V_ * z;
    Vector t(u.size());
    double g = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      const double a = std::abs(u[i]);
      g += w_[i] * std::pow(a, q_);
      t[i] = w_[i] * q_ * std::copysign(std::pow(a, q_ - 1.0), u[i]);
    }
    if (g_out) *g_out = g;
    return V_.transpose() * t;
  }

  Matrix hessian(const Vector& z) const {
    const Vector u = V_ * z;
    Vector d(u.size());
    const double floor = 1e-8 * std::max(1e-300, u.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      d[i] = w_[i] * q_ * (q_ - 1.0) * std::pow(std::max(std::abs(u[i]), floor), q_ - 2.0);
    }
    return V_.transpose() * d.asDiagonal() * V_;
  }

 private:
  double q_;
  Vector w_;
  Matrix V_;
};

struct Polished {
  Vector z;
  double g = 0.0;
  double rel = std::numeric_limits<double>::infinity();
};

// Tangential part of the gradient of ln|u|_q, i.e. t / (q g).
Vector tangent(const Vector& z, const Vector& grad, double q, double g) {
  return (grad - grad.dot(z) * z) / (q * g);
}

Polished polish(const LqOnSpan& lq, Vector z, double q, SphereSense sense,
                const SphereSearchOptions& opts) {
  const double sign = sense == SphereSense::maximize ? 1.0 : -1.0;
  const int m = lq.dim();
  z.normalize();
  Polished out;
  for (int it = 0; it < opts.max_iter; ++it) {
    double g = 0.0;
    const Vector grad = lq.gradient(z, &g);
    if (!(g > 0.0)) break;
    const Vector t = tangent(z, grad, q, g);
    const double rel = t.norm();
    out = {z, g, rel};
    if (rel < opts.grad_tol) break;
    if (m == 1) break;

    const double h0 = std::log(g) / q;
    if (rel < 1e-2) {
      // Riemannian Newton step on the sphere
      const Matrix I = Matrix::Identity(m, m);
      const Matrix Pz = I - z * z.transpose();
      const Matrix A = Pz * (lq.hessian(z) - grad.dot(z) * I) * Pz + z * z.transpose();
      Vector d = A.ldlt().solve(-(grad - grad.dot(z) * z));
      d = Pz * d;
      if (d.allFinite()) {
        Vector zn = (z + d).normalized();
        double gn = 0.0;
        const Vector gradn = lq.gradient(zn, &gn);
        const double reln = gn > 0.0 ? tangent(zn, gradn, q, gn).norm() : rel;
        const double hn = std::log(gn) / q;
        if (reln < rel && sign * (hn - h0) > -1e-12 * std::abs(h0) - 1e-14) {
          z = zn;
          continue;
        }
      }
    }
    if (sense == SphereSense::maximize) {
      // convexity of |u|_q^q makes z <- grad / |grad| an ascent step
      Vector zn = grad.normalized();
      if (lq.value(zn) > g) {
        z = zn;
        continue;
      }
    }
    // Armijo on ln|u|_q along the tangential direction
    const Vector d = sign * t;
    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
      Vector zn = (z + alpha * d).normalized();
      const double gn = lq.value(zn);
      if (!(gn > 0.0)) continue;
      const double hn = std::log(gn) / q;
      if (sign * (hn - h0) >= 1e-4 * alpha * d.squaredNorm()) {
        z = zn;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return out;
}

bool better(const Polished& a, const Polished& b, SphereSense sense) {
  return sense == SphereSense::maximize ? a.g > b.g : a.g < b.g;
}

}  // namespace

SphereResult sphere_extremum(const Basis& basis, const Matrix& B, double q, SphereSense sense,
                             const SphereSearchOptions& options) {
  if (!(q >= 1.0)) throw Error(Errc::BadParams, "sphere search needs q >= 1");
  if (B.cols() < 1 || B.rows() != basis.dim()) {
    throw Error(Errc::BadParams, "sphere search needs a basis matrix with dim rows");
  }
  const LqOnSpan lq(basis, B, q);
  const int m = lq.dim();

  std::vector<Vector> starts = options.starts;
  if (m == 1) {
    starts.assign(1, Vector::Ones(1));
  } else if (m == 2) {
    // exhaustive scan of the half circle (|u|_q is even)
    const int samples = 3600;
    Vector best_z(2);
    double best = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double theta = std::numbers::pi * i / samples;
      Vector z(2);
      z << std::cos(theta), std::sin(theta);
      const double g = lq.value(z);
      if (i == 0 || (sense == SphereSense::maximize ? g > best : g < best)) {
        best = g;
        best_z = z;
      }
    }
    starts.push_back(best_z);
  } else {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    for (int r = 0; r < options.restarts; ++r) {
      Vector z(m);
      for (int i = 0; i < m; ++i) z[i] = normal(rng);
      starts.push_back(z);
    }
  }

  Polished best;
  bool have = false;
  for (const auto& z0 : starts) {
    if (z0.size() != m || !(z0.norm() > 0.0)) continue;
    Polished p = polish(lq, z0, q, sense, options);
    if (!have || better(p, best, sense)) {
      best = p;
      have = true;
    }
  }
  if (!have || best.z.size() == 0) {
    throw Error(Errc::NoConvergence, "sphere search found no admissible start");
  }

  SphereResult result;
  result.z = best.z;
  result.u = B * best.z;
  result.value = std::pow(best.g, 1.0 / q);
  result.rel_grad = m == 1 ? 0.0 : best.rel;
  result.converged = result.rel_grad < options.grad_tol;
  if (options.require_convergence && !result.converged) {
    throw Error(Errc::NoConvergence,
                "sphere search stalled with relative gradient " + std::to_string(result.rel_grad));
  }
  return result;
}

}  // namespace fraclap
