#include "fraclap/spectrum.hpp"

#include <cmath>
#include <random>

#include "fraclap/error.hpp"
#include "fraclap/sphere_search.hpp"

namespace fraclap {

namespace {

// Residual below which a stalled eigen iteration is accepted (roundoff floor
// of S x - theta M x relative to the dual norm).
constexpr double kStallAccept = 1e-7;

void fix_sign(Vector& v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);
  if (v[i] < 0.0) v = -v;
}

// M-orthonormalizes vectors inside clusters of (numerically) equal
// eigenvalues and applies the sign convention.
void finalize(const AssembledSystem& sys, SpectralData& data) {
  const int n = data.count();
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n && data.lambdas[end] - data.lambdas[end - 1] < 1e-8 * data.lambdas[end]) ++end;
    for (int i = start; i < end; ++i) {
      Vector& v = data.efuns[i];
      for (int j = start; j < i; ++j) v -= data.efuns[j].dot(sys.M * v) * data.efuns[j];
      v /= std::sqrt(v.dot(sys.M * v));
    }
    start = end;
  }
  for (auto& v : data.efuns) fix_sign(v);
}

}  // namespace

Matrix SpectralData::matrix() const {
  if (efuns.empty()) return Matrix();
  Matrix E(efuns.front().size(), count());
  for (int k = 0; k < count(); ++k) E.col(k) = efuns[k];
  return E;
}

SpectralData eig_dense(const AssembledSystem& sys) {
  Eigen::LLT<Matrix> llt(sys.M);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::FactorizationFailure, "mass matrix is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sys.S, sys.M);
  if (es.info() != Eigen::Success) {
    throw Error(Errc::FactorizationFailure, "generalized eigensolver failed");
  }
  SpectralData data;
  data.spec_id = sys.spec.id();
  for (int k = 0; k < sys.dim(); ++k) {
    data.lambdas.push_back(es.eigenvalues()[k]);
    Vector v = es.eigenvectors().col(k);
    v /= std::sqrt(v.dot(sys.M * v));
    data.efuns.push_back(v);
  }
  finalize(sys, data);
  return data;
}

SpectralData eig_recursive(const AssembledSystem& sys, int k_max,
                           const EigRecursiveOptions& options) {
  const int dim = sys.dim();
  if (k_max < 1 || k_max > dim) throw Error(Errc::BadParams, "eig_recursive needs 1 <= k_max <= dim");
  Eigen::LLT<Matrix> chol(sys.S);
  if (chol.info() != Eigen::Success) {
    throw Error(Errc::FactorizationFailure, "stiffness matrix is not positive definite");
  }
  SpectralData data;
  data.spec_id = sys.spec.id();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;

  // S-orthogonal projection onto the complement of e_1 .. e_{k-1}
  std::vector<Vector> Se;
  auto project = [&](Vector v) {
    for (std::size_t j = 0; j < Se.size(); ++j) {
      v -= (Se[j].dot(v) / data.lambdas[j]) * data.efuns[j];
    }
    return v;
  };
  auto deflation_error = [&](const Vector& v) {
    const double nv = std::sqrt(std::max(0.0, v.dot(sys.S * v)));
    double worst = 0.0;
    for (std::size_t j = 0; j < Se.size(); ++j) {
      worst = std::max(worst, std::abs(Se[j].dot(v)) / (std::sqrt(data.lambdas[j]) * nv));
    }
    return worst;
  };

  for (int k = 0; k < k_max; ++k) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = normal(rng);
    x = project(project(x));
    x /= std::sqrt(x.dot(sys.M * x));
    Vector p = Vector::Zero(dim);
    double theta = x.dot(sys.S * x);
    double res = INFINITY;
    std::vector<double> history;
    int it = 0;
    for (; it < options.max_iter; ++it) {
      const Vector r = sys.S * x - theta * (sys.M * x);
      // H-gradient of the Rayleigh quotient restricted to the complement; the
      // multipliers of the deflation constraints drop out
      Vector w = project(project(chol.solve(r)));
      res = std::sqrt(std::max(0.0, w.dot(sys.S * w))) / std::sqrt(theta);
      if (res < options.tol) break;
      // roundoff floor: no progress over the last few steps
      history.push_back(res);
      if (history.size() > 4 && res < kStallAccept && res > 0.5 * history[history.size() - 5]) break;

      // Rayleigh-Ritz on span{x, w, p}, basis made S-orthonormal by two
      // passes of Gram-Schmidt; nearly dependent directions are dropped
      std::vector<Vector> cols{x, w};
      if (p.squaredNorm() > 0.0) cols.push_back(p);
      std::vector<Vector> qs;
      std::vector<Vector> Sqs;
      for (Vector v : cols) {
        const double n0 = std::sqrt(std::max(0.0, v.dot(sys.S * v)));
        if (!(n0 > 0.0)) continue;
        v /= n0;
        for (int pass = 0; pass < 2; ++pass) {
          for (std::size_t j = 0; j < qs.size(); ++j) v -= Sqs[j].dot(v) * qs[j];
        }
        const Vector Sv = sys.S * v;
        const double n1 = std::sqrt(std::max(0.0, v.dot(Sv)));
        if (n1 < 1e-10) continue;
        qs.push_back(v / n1);
        Sqs.push_back(Sv / n1);
      }
      const int keep = static_cast<int>(qs.size());
      Matrix Q(dim, keep);
      for (int c = 0; c < keep; ++c) Q.col(c) = qs[c];
      // in the S-orthonormal basis: min theta = 1 / max(z^T M_Q z)
      const Matrix MQ = Q.transpose() * sys.M * Q;
      Eigen::SelfAdjointEigenSolver<Matrix> rr(MQ);
      const Vector z = rr.eigenvectors().col(keep - 1);
      Vector xn = Q * z;
      xn /= std::sqrt(xn.dot(sys.M * xn));
      if (xn.dot(sys.M * x) < 0.0) xn = -xn;
      p = xn - x;
      x = project(xn);
      x /= std::sqrt(x.dot(sys.M * x));
      theta = x.dot(sys.S * x);
      if (deflation_error(x) > 1e-6) {
        throw Error(Errc::DeflationLoss,
                    "eigenvector " + std::to_string(k + 1) + " lost S-orthogonality");
      }
    }
    if (!(res < options.tol) && !(res < kStallAccept)) {
      throw Error(Errc::NoConvergence,
                  "eigenpair " + std::to_string(k + 1) + " stalled at residual " + std::to_string(res));
    }
    data.lambdas.push_back(theta);
    data.efuns.push_back(x);
    Se.push_back(sys.S * x);
  }
  finalize(sys, data);
  return data;
}

SpectralChecks check_spectrum(const AssembledSystem& sys, const SpectralData& data) {
  SpectralChecks c;
  const int n = data.count();
  for (int i = 0; i < n; ++i) {
    const Vector Mi = sys.M * data.efuns[i];
    const Vector Si = sys.S * data.efuns[i];
    const double mii = data.efuns[i].dot(Mi);
    const double sii = data.efuns[i].dot(Si);
    c.l2check.push_back(std::abs(mii - 1.0));
    c.norm_identity = std::max(c.norm_identity, std::abs(sii - data.lambdas[i] * mii) / data.lambdas[i]);
    double om = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mij = data.efuns[j].dot(Mi);
      c.ortho_M = std::max(c.ortho_M, std::abs(mij - (i == j ? 1.0 : 0.0)));
      if (j < i) om = std::max(om, std::abs(mij));
      if (j != i) {
        c.ortho_S = std::max(c.ortho_S, std::abs(data.efuns[j].dot(Si)) /
                                            std::sqrt(data.lambdas[i] * data.lambdas[j]));
      }
    }
    c.orthomax.push_back(om);
  }
  return c;
}

Matrix s_orthonormal(const AssembledSystem& sys, const Matrix& E) {
  const Matrix G = E.transpose() * sys.S * E;
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::FactorizationFailure, "subspace Gram matrix is singular");
  }
  // E L^{-T}
  return llt.matrixU().solve<Eigen::OnTheRight>(E);
}

SubspacePair subspaces(const AssembledSystem& sys, const SpectralData& spectral, int k) {
  if (k < 1 || k > spectral.count()) throw Error(Errc::BadParams, "subspaces needs 1 <= k <= count");
  const Matrix E = spectral.matrix();
  SubspacePair pair;
  pair.k = k;
  pair.Yk = s_orthonormal(sys, E.leftCols(k));
  pair.Zk = s_orthonormal(sys, E.rightCols(spectral.count() - k + 1));
  return pair;
}

double beta_k(const Basis& basis, const AssembledSystem& sys, const SubspacePair& pair, double q,
              int restarts, std::uint64_t seed, const Vector* warm, Vector* argmax) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error(Errc::BadParams, "beta_k needs finite q >= 1");
  SphereSearchOptions opts;
  opts.restarts = restarts;
  opts.seed = seed + static_cast<std::uint64_t>(pair.k);
  if (warm) opts.starts.push_back(pair.Zk.transpose() * (sys.S * *warm));
  const auto res = sphere_extremum(basis, pair.Zk, q, SphereSense::maximize, opts);
  if (argmax) *argmax = res.u;
  return res.value;
}

std::vector<double> beta_sequence(const Basis& basis, const AssembledSystem& sys,
                                  const SpectralData& spectral, double q, int kmax, int restarts,
                                  std::uint64_t seed) {
  if (kmax < 1 || kmax > spectral.count()) throw Error(Errc::BadParams, "beta_sequence needs 1 <= kmax <= count");
  std::vector<double> betas(kmax);
  Vector warm;
  for (int k = kmax; k >= 1; --k) {
    Vector argmax;
    betas[k - 1] = beta_k(basis, sys, subspaces(sys, spectral, k), q, restarts, seed,
                          warm.size() ? &warm : nullptr, &argmax);
    warm = argmax;
  }
  return betas;
}

FiniteDimConstants finite_dim_constants(const AssembledSystem& sys, const Basis& basis,
                                        const SpectralData& spectral, int k, double q,
                                        int restarts) {
  const auto pair = subspaces(sys, spectral, k);
  SphereSearchOptions opts;
  opts.restarts = restarts;
  opts.seed = sys.spec.seed + static_cast<std::uint64_t>(k);
  FiniteDimConstants c;
  c.C_kq_tilde = sphere_extremum(basis, pair.Yk, q, SphereSense::maximize, opts).value;
  c.C_kq = sphere_extremum(basis, pair.Yk, q, SphereSense::minimize, opts).value;
  return c;
}

}  // namespace fraclap
