#include "nsdpp/transforms.hpp"

#include <Eigen/LU>

#include <cmath>

namespace nsdpp {

Kernel particle_hole(const Kernel& k, const SubsetMask& s) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "particle_hole expects a correlation kernel");
  if (s.n() != k.size()) fail(Errc::dim_mismatch, "subset ground set does not match kernel size");
  // Row surgery: negate the rows in s and add one to their diagonal entry.
  Matrix out = k.entries();
  for (int i : s.members()) {
    out.row(i) = -out.row(i);
    out(i, i) += 1.0;
  }
  return correlation(std::move(out));
}

Kernel switching_kernel(const Kernel& k, const Vector& p) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "switching_kernel expects a correlation kernel");
  if (p.size() != k.size()) fail(Errc::dim_mismatch, "switch probability length != n");
  for (Index i = 0; i < p.size(); ++i)
    if (!(p(i) >= 0.0 && p(i) <= 1.0))
      fail(Errc::domain, "switch probabilities must lie in [0, 1]");
  return correlation(blend_rows(k.entries(), p));
}

Matrix ppt(const Matrix& m, const SubsetMask& s) {
  if (m.rows() != m.cols()) fail(Errc::dim_mismatch, "ppt of a non-square matrix");
  if (s.n() != m.rows()) fail(Errc::dim_mismatch, "subset ground set does not match matrix size");
  if (s.empty()) return m;

  const std::vector<int>& in = s.members();
  const std::vector<int> out = s.complement().members();

  const Matrix a = submatrix(m, in, in);
  Eigen::PartialPivLU<Matrix> lu(a);
  const Real det = lu.determinant();
  if (std::abs(det) <= 1e-12 * std::max<Real>(1.0, a.norm()))
    fail(Errc::singular_pivot, "pivot block m_s is numerically singular");

  const Matrix ainv = lu.solve(Matrix::Identity(a.rows(), a.cols()));
  Matrix result(m.rows(), m.cols());
  auto place = [&](const std::vector<int>& rows, const std::vector<int>& cols, const Matrix& blk) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        result(rows[i], cols[j]) = blk(static_cast<Index>(i), static_cast<Index>(j));
  };
  place(in, in, ainv);
  if (!out.empty()) {
    const Matrix b = submatrix(m, in, out);
    const Matrix c = submatrix(m, out, in);
    const Matrix d = submatrix(m, out, out);
    place(in, out, -ainv * b);
    place(out, in, c * ainv);
    place(out, out, d - c * ainv * b);
  }
  return result;
}

Kernel ppt_lensemble_particle_hole(const Kernel& l, const SubsetMask& s) {
  if (l.role() != KernelRole::LEnsemble)
    fail(Errc::domain, "ppt_lensemble_particle_hole expects an L-ensemble kernel");
  Matrix lt = ppt(l.entries(), s);
  // The transformed process is only an L-ensemble when the K-side conversion
  // exists; surface the failure here rather than on first use.
  const Real det = determinant(Matrix::Identity(lt.rows(), lt.cols()) + lt);
  if (det == 0.0 || 1.0 / std::abs(det) > 1e12)
    fail(Errc::singular_conversion, "ppt result does not admit an L-ensemble normalization");
  return lensemble(std::move(lt));
}

Kernel thin(const Kernel& k, Real p) {
  if (k.role() != KernelRole::Correlation) fail(Errc::domain, "thin expects a correlation kernel");
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::domain, "thinning probability must lie in [0, 1]");
  return correlation(p * k.entries());
}

}  // namespace nsdpp
