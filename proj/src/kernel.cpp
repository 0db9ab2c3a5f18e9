#include "nsdpp/kernel.hpp"

#include <Eigen/LU>

#include <cmath>
#include <cstdint>

namespace nsdpp {

Kernel::Kernel(Matrix entries, KernelRole role) : entries_(std::move(entries)), role_(role) {
  if (entries_.rows() != entries_.cols()) fail(Errc::dim_mismatch, "kernel must be square");
  if (entries_.rows() < 1) fail(Errc::domain, "kernel dimension must be >= 1");
  if (!entries_.allFinite()) fail(Errc::domain, "kernel entries must be finite");
}

Kernel correlation(Matrix entries) { return Kernel(std::move(entries), KernelRole::Correlation); }
Kernel lensemble(Matrix entries) { return Kernel(std::move(entries), KernelRole::LEnsemble); }

Real determinant(const Matrix& m) {
  if (m.rows() != m.cols()) fail(Errc::dim_mismatch, "determinant of a non-square matrix");
  if (m.rows() == 0) return 1.0;
  if (m.rows() == 1) return m(0, 0);
  return Eigen::PartialPivLU<Matrix>(m).determinant();
}

Matrix submatrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
  return out;
}

Matrix principal_submatrix(const Matrix& m, const SubsetMask& s) {
  return submatrix(m, s.members(), s.members());
}

Real principal_minor(const Matrix& m, const SubsetMask& s) {
  if (s.n() != m.rows()) fail(Errc::dim_mismatch, "subset ground set does not match kernel size");
  if (s.empty()) return 1.0;
  return determinant(principal_submatrix(m, s));
}

Real principal_minor(const Kernel& k, const SubsetMask& s) {
  return principal_minor(k.entries(), s);
}

Matrix blend_rows(const Matrix& k, const Vector& p) {
  if (p.size() != k.rows()) fail(Errc::dim_mismatch, "blend weight length does not match kernel");
  Matrix out = (Vector::Ones(p.size()) - 2.0 * p).asDiagonal() * k;
  out.diagonal() += p;
  return out;
}

Kernel k_to_l(const Kernel& k) {
  if (k.role() != KernelRole::Correlation) fail(Errc::domain, "k_to_l expects a correlation kernel");
  const Matrix& km = k.entries();
  const Matrix base = Matrix::Identity(km.rows(), km.cols()) - km;
  Eigen::PartialPivLU<Matrix> lu(base);
  const Real det = lu.determinant();
  if (det == 0.0 || 1.0 / std::abs(det) > 1e12)
    fail(Errc::singular_conversion, "I - K is numerically singular");
  Matrix l = km * lu.inverse();
  return lensemble(std::move(l));
}

Kernel l_to_k(const Kernel& l) {
  if (l.role() != KernelRole::LEnsemble) fail(Errc::domain, "l_to_k expects an L-ensemble kernel");
  const Matrix& lm = l.entries();
  const Matrix base = Matrix::Identity(lm.rows(), lm.cols()) + lm;
  Eigen::PartialPivLU<Matrix> lu(base);
  const Real det = lu.determinant();
  if (det == 0.0 || 1.0 / std::abs(det) > 1e12)
    fail(Errc::singular_conversion, "I + L is numerically singular");
  Matrix k = lm * lu.inverse();
  return correlation(std::move(k));
}

Real set_probability(const Kernel& k, const SubsetMask& s) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "set_probability expects a correlation kernel");
  if (s.n() != k.size()) fail(Errc::dim_mismatch, "subset ground set does not match kernel size");
  Vector p = Vector::Ones(k.size());
  for (int i : s.members()) p(i) = 0.0;
  return determinant(blend_rows(k.entries(), p));
}

Real sum_minor_identity_check(const Kernel& k, int cap) {
  const int n = static_cast<int>(k.size());
  if (n > cap) fail(Errc::cap_exceeded, "sum-of-minors identity check above enumeration cap");
  const Matrix& m = k.entries();
  Real sum = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask)
    sum += principal_minor(m, SubsetMask::from_bits(n, mask));
  const Real rhs = determinant(Matrix::Identity(n, n) + m);
  return std::abs(sum - rhs);
}

}  // namespace nsdpp
