#pragma once

#include <cstdint>

#include "nsdpp/validation.hpp"

namespace nsdpp {

/// 2n x 2n kernel of a coupled pair (X1, X2): diagonal blocks are the
/// marginal kernels, off-diagonal blocks M (upper right) and N (lower left)
/// control the cross-covariance P(i in X1, j in X2) - product = -M_ij N_ji.
struct CouplingKernel {
  Matrix full;

  Index half() const { return full.rows() / 2; }
  auto k1() const { return full.topLeftCorner(half(), half()); }
  auto k2() const { return full.bottomRightCorner(half(), half()); }
  auto m() const { return full.topRightCorner(half(), half()); }
  auto n_block() const { return full.bottomLeftCorner(half(), half()); }

  Kernel as_kernel() const { return Kernel(full, KernelRole::Correlation); }
  Kernel k1_kernel() const { return Kernel(k1(), KernelRole::Correlation); }
  Kernel k2_kernel() const { return Kernel(k2(), KernelRole::Correlation); }
};

CouplingKernel make_coupling(Matrix full);

/// Block-diagonal coupling: X1 and X2 independent.
CouplingKernel independent_coupling(const Kernel& k1, const Kernel& k2);

/// [K, I-K; K, I-K]: X2 = X1^c almost surely.
CouplingKernel complement_coupling(const Kernel& k);

/// [K, I-K; -K, K]: X1 = X2 almost surely.
CouplingKernel identical_coupling(const Kernel& k);

/// [K, K; K, K]: X1, X2 disjoint random split of a DPP with kernel 2K.
/// Throws InvalidDouble unless 2K certifies as a DPP kernel.
CouplingKernel split_coupling(const Kernel& k, int cap = kDefaultEnumerationCap);

/// [K1, -N; N^T, K2] for symmetric K1, K2 with spectra in [0, 1].
CouplingKernel sign_alternate_coupling(const Kernel& k1, const Kernel& k2, const Matrix& nmat);

/// Validity of the sign-alternate coupling: equivalent to the symmetric
/// matrix [K1, N; N^T, I-K2] having spectrum in [0, 1].
ValidationReport sign_alternate_is_valid(const Kernel& k1, const Kernel& k2, const Matrix& nmat);

/// Parameters of the simultaneously-diagonalized attractive coupling:
/// K = P D(lambda) P^T, M = P D(mu) P^T, N = -P D(nu) P^T.
struct CouplingSpec {
  Vector lambda;  // marginal eigenvalues, in [0, 1]
  Vector mu, nu;  // cross-block eigenvalues, >= 0
  Matrix basis;   // orthogonal P
};

/// The two squared singular values contributed by index i of the coupling
/// deviation from I/2; both must stay <= 1/4 for the coupling to be valid.
/// sign is +1 or -1.
Real bound_ev_value(Real lambda, Real mu, Real nu, int sign);

/// Default parameter rule: mu_i = nu_i drawn uniformly from
/// [0, mu_scale * r_i] with r_i = sqrt(1/4 - (lambda_i - 1/2)^2), so the
/// singular-value bound holds automatically for mu_scale <= 1.
CouplingSpec random_attractive_spec(const Kernel& symmetric_k, std::uint64_t seed,
                                    Real mu_scale = 1.0);

/// Assembles the attractive coupling; guaranteed ||full - I/2||_2 <= 1/2
/// when the per-index bound holds (else BoundViolated naming the worst index).
CouplingKernel attractive_coupling(const CouplingSpec& spec);

/// Cov(1_{i in X1}, 1_{j in X2}) = -M_ij N_ji, exact from the kernel.
Real cross_covariance(const CouplingKernel& ck, Index i, Index j);

}  // namespace nsdpp
