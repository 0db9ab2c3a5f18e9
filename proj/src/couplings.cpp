#include "nsdpp/couplings.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "nsdpp/rng.hpp"

namespace nsdpp {

namespace {

void check_same_size(const Kernel& a, const Kernel& b) {
  if (a.size() != b.size()) fail(Errc::dim_mismatch, "coupled kernels must have equal size");
}

bool is_symmetric(const Matrix& m) { return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12; }

}  // namespace

CouplingKernel make_coupling(Matrix full) {
  if (full.rows() != full.cols() || full.rows() % 2 != 0)
    fail(Errc::dim_mismatch, "coupling kernel must be square with even dimension");
  if (!full.allFinite()) fail(Errc::domain, "coupling kernel entries must be finite");
  return CouplingKernel{std::move(full)};
}

CouplingKernel independent_coupling(const Kernel& k1, const Kernel& k2) {
  check_same_size(k1, k2);
  const Index n = k1.size();
  Matrix full = Matrix::Zero(2 * n, 2 * n);
  full.topLeftCorner(n, n) = k1.entries();
  full.bottomRightCorner(n, n) = k2.entries();
  return make_coupling(std::move(full));
}

CouplingKernel complement_coupling(const Kernel& k) {
  const Index n = k.size();
  const Matrix& m = k.entries();
  Matrix complement = -m;
  complement.diagonal().array() += 1.0;  // I - K by row surgery, matching particle_hole
  Matrix full(2 * n, 2 * n);
  full.topLeftCorner(n, n) = m;
  full.topRightCorner(n, n) = complement;
  full.bottomLeftCorner(n, n) = m;
  full.bottomRightCorner(n, n) = complement;
  return make_coupling(std::move(full));
}

CouplingKernel identical_coupling(const Kernel& k) {
  const Index n = k.size();
  const Matrix& m = k.entries();
  Matrix complement = -m;
  complement.diagonal().array() += 1.0;
  Matrix full(2 * n, 2 * n);
  full.topLeftCorner(n, n) = m;
  full.topRightCorner(n, n) = complement;
  full.bottomLeftCorner(n, n) = -m;
  full.bottomRightCorner(n, n) = m;
  return make_coupling(std::move(full));
}

CouplingKernel split_coupling(const Kernel& k, int cap) {
  const Index n = k.size();
  Kernel doubled = correlation(2.0 * k.entries());
  ValidationReport report = sufficient_conditions(doubled);
  if (report.verdict == Verdict::Unknown && n <= cap) report = is_dpp_cara1(doubled, cap);
  if (report.verdict != Verdict::Valid)
    fail(Errc::invalid_double, report.verdict == Verdict::Invalid
                                   ? "2K is not a DPP kernel"
                                   : "validity of 2K could not be certified");
  Matrix full(2 * n, 2 * n);
  full.topLeftCorner(n, n) = k.entries();
  full.topRightCorner(n, n) = k.entries();
  full.bottomLeftCorner(n, n) = k.entries();
  full.bottomRightCorner(n, n) = k.entries();
  return make_coupling(std::move(full));
}

CouplingKernel sign_alternate_coupling(const Kernel& k1, const Kernel& k2, const Matrix& nmat) {
  check_same_size(k1, k2);
  const Index n = k1.size();
  if (nmat.rows() != n || nmat.cols() != n)
    fail(Errc::dim_mismatch, "cross block must match kernel size");
  if (!is_symmetric(k1.entries()) || !is_symmetric(k2.entries()))
    fail(Errc::not_symmetric, "sign-alternate coupling requires symmetric marginals");
  Matrix full(2 * n, 2 * n);
  full.topLeftCorner(n, n) = k1.entries();
  full.topRightCorner(n, n) = -nmat;
  full.bottomLeftCorner(n, n) = nmat.transpose();
  full.bottomRightCorner(n, n) = k2.entries();
  return make_coupling(std::move(full));
}

ValidationReport sign_alternate_is_valid(const Kernel& k1, const Kernel& k2, const Matrix& nmat) {
  check_same_size(k1, k2);
  const Index n = k1.size();
  if (nmat.rows() != n || nmat.cols() != n)
    fail(Errc::dim_mismatch, "cross block must match kernel size");
  if (!is_symmetric(k1.entries()) || !is_symmetric(k2.entries()))
    fail(Errc::not_symmetric, "sign-alternate validity requires symmetric marginals");
  // Particle-hole image on the second block is the symmetric matrix
  // [K1, N; N^T, I-K2]; validity reduces to its spectrum lying in [0, 1].
  Matrix image(2 * n, 2 * n);
  image.topLeftCorner(n, n) = k1.entries();
  image.topRightCorner(n, n) = nmat;
  image.bottomLeftCorner(n, n) = nmat.transpose();
  image.bottomRightCorner(n, n) = Matrix::Identity(n, n) - k2.entries();
  return sufficient_conditions(correlation(std::move(image)));
}

Real bound_ev_value(Real lambda, Real mu, Real nu, int sign) {
  const Real centered = lambda - 0.5;
  const Real root =
      std::sqrt(4.0 * centered * centered + (mu + nu) * (mu + nu)) * std::abs(mu - nu);
  return centered * centered + 0.5 * (mu * mu + nu * nu + (sign >= 0 ? root : -root));
}

CouplingSpec random_attractive_spec(const Kernel& symmetric_k, std::uint64_t seed, Real mu_scale) {
  if (symmetric_k.role() != KernelRole::Correlation)
    fail(Errc::domain, "attractive spec expects a correlation kernel");
  if (!is_symmetric(symmetric_k.entries()))
    fail(Errc::not_symmetric, "attractive spec requires a symmetric kernel");
  if (!(mu_scale >= 0.0)) fail(Errc::domain, "mu_scale must be nonnegative");

  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric_k.entries());
  if (es.info() != Eigen::Success) fail(Errc::convergence_failure, "eigensolver failed");

  CouplingSpec spec;
  spec.basis = es.eigenvectors();
  spec.lambda = es.eigenvalues();
  const Index n = spec.lambda.size();
  for (Index i = 0; i < n; ++i) {
    if (spec.lambda(i) < -1e-9 || spec.lambda(i) > 1.0 + 1e-9)
      fail(Errc::domain, "kernel spectrum outside [0, 1]; not a valid symmetric DPP kernel");
    spec.lambda(i) = std::clamp(spec.lambda(i), 0.0, 1.0);
  }

  RngStream rng(seed, 0x5eC0u);
  spec.mu.resize(n);
  spec.nu.resize(n);
  for (Index i = 0; i < n; ++i) {
    const Real centered = spec.lambda(i) - 0.5;
    const Real radius = std::sqrt(std::max(0.25 - centered * centered, 0.0));
    const Real value = rng.uniform(0.0, mu_scale * radius);
    spec.mu(i) = value;
    spec.nu(i) = value;  // equal mu and nu make the bound reduce to a circle test
  }
  return spec;
}

CouplingKernel attractive_coupling(const CouplingSpec& spec) {
  const Index n = spec.lambda.size();
  if (spec.mu.size() != n || spec.nu.size() != n)
    fail(Errc::dim_mismatch, "lambda, mu, nu must have equal length");
  if (spec.basis.rows() != n || spec.basis.cols() != n)
    fail(Errc::dim_mismatch, "basis must be n x n");
  const Matrix& p = spec.basis;
  if ((p.transpose() * p - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
    fail(Errc::domain, "basis is not orthogonal");

  for (Index i = 0; i < n; ++i) {
    if (!(spec.lambda(i) >= 0.0 && spec.lambda(i) <= 1.0))
      fail(Errc::domain, "lambda outside [0, 1]");
    if (!(spec.mu(i) >= 0.0) || !(spec.nu(i) >= 0.0))
      fail(Errc::domain, "mu and nu must be nonnegative");
  }

  Real worst_value = -std::numeric_limits<Real>::infinity();
  Index worst_index = 0;
  for (Index i = 0; i < n; ++i) {
    const Real v = bound_ev_value(spec.lambda(i), spec.mu(i), spec.nu(i), +1);
    if (v > worst_value) {
      worst_value = v;
      worst_index = i;
    }
  }
  if (worst_value > 0.25 + 1e-12) {
    std::ostringstream msg;
    msg << "coupling eigenvalue bound violated at index " << worst_index
        << ": value " << worst_value << " > 1/4";
    fail(Errc::bound_violated, msg.str());
  }

  const Matrix k = p * spec.lambda.asDiagonal() * p.transpose();
  const Matrix m = p * spec.mu.asDiagonal() * p.transpose();
  const Matrix nb = -(p * spec.nu.asDiagonal() * p.transpose());
  Matrix full(2 * n, 2 * n);
  full.topLeftCorner(n, n) = k;
  full.topRightCorner(n, n) = m;
  full.bottomLeftCorner(n, n) = nb;
  full.bottomRightCorner(n, n) = k;
  return make_coupling(std::move(full));
}

Real cross_covariance(const CouplingKernel& ck, Index i, Index j) {
  const Index n = ck.half();
  if (i < 0 || i >= n || j < 0 || j >= n)
    fail(Errc::index_out_of_range, "cross covariance indices must lie in [0, n)");
  return -ck.m()(i, j) * ck.n_block()(j, i);
}

}  // namespace nsdpp
