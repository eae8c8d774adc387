#pragma once

#include <cstdint>
#include <vector>

#include "fraclap/assembly.hpp"
#include "fraclap/basis.hpp"

namespace fraclap {

/// Eigenpairs of S e = lambda M e, increasing, with |e_k|_2 = 1.
struct SpectralData {
  std::vector<double> lambdas;
  std::vector<Vector> efuns;  // coefficient vectors
  std::uint64_t spec_id = 0;

  int count() const { return static_cast<int>(lambdas.size()); }
  /// dim x count matrix whose columns are e_1 .. e_count.
  Matrix matrix() const;
};

/// All eigenpairs by a dense generalized symmetric-definite solver.
/// Throws FactorizationFailure if M is not SPD.
SpectralData eig_dense(const AssembledSystem& sys);

struct EigRecursiveOptions {
  double tol = 1e-12;  // relative dual-norm residual
  int max_iter = 2000;
  std::uint64_t seed = 0;
};

/// lambda_{k+1} = min{u^T S u : u^T M u = 1, u^T S e_j = 0 for j <= k},
/// found one k at a time by locally optimal preconditioned descent on the
/// Rayleigh quotient, restricted to the S-orthogonal complement of the pairs
/// already found. Throws DeflationLoss if that orthogonality degrades beyond
/// 1e-6, NoConvergence if an iteration stalls.
SpectralData eig_recursive(const AssembledSystem& sys, int k_max,
                           const EigRecursiveOptions& options = {});

/// Deviations from the identities the eigenpairs must satisfy.
struct SpectralChecks {
  double ortho_M = 0.0;        // max |e_i^T M e_j - delta_ij|
  double ortho_S = 0.0;        // max |e_i^T S e_j| / sqrt(lambda_i lambda_j), i != j
  double norm_identity = 0.0;  // max |e_k^T S e_k - lambda_k e_k^T M e_k| / lambda_k
  std::vector<double> l2check;   // per k: |e_k^T M e_k - 1|
  std::vector<double> orthomax;  // per k: max_{j<k} |e_j^T M e_k|
};

SpectralChecks check_spectrum(const AssembledSystem& sys, const SpectralData& data);

/// Y_k = span{e_1 .. e_k}, Z_k = span{e_k .. e_count}, each given by an
/// S-orthonormal coefficient basis.
struct SubspacePair {
  int k = 1;
  Matrix Yk;
  Matrix Zk;
};

SubspacePair subspaces(const AssembledSystem& sys, const SpectralData& spectral, int k);

/// beta_k(q) = sup{|u|_q : u in Z_k, ||u|| = 1}, finite q >= 1. `warm` (coefficients) is an
/// extra start, projected onto Z_k.
double beta_k(const Basis& basis, const AssembledSystem& sys, const SubspacePair& pair, double q,
              int restarts, std::uint64_t seed, const Vector* warm = nullptr,
              Vector* argmax = nullptr);

/// beta_1 .. beta_kmax, computed from k = kmax down to 1, each warm-started
/// from the maximizer of the next one. Since Z_{k+1} is a subspace of Z_k the
/// sequence is nonincreasing by construction.
std::vector<double> beta_sequence(const Basis& basis, const AssembledSystem& sys,
                                  const SpectralData& spectral, double q, int kmax, int restarts,
                                  std::uint64_t seed);

struct FiniteDimConstants {
  double C_kq = 0.0;        // min of |u|_q on the unit sphere of Y_k
  double C_kq_tilde = 0.0;  // max
};

FiniteDimConstants finite_dim_constants(const AssembledSystem& sys, const Basis& basis,
                                        const SpectralData& spectral, int k, double q,
                                        int restarts = 8);

/// Columns of E made S-orthonormal (E L^{-T} with E^T S E = L L^T).
Matrix s_orthonormal(const AssembledSystem& sys, const Matrix& E);

}  // namespace fraclap
