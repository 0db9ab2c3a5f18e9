#pragma once

#include <vector>

#include "nsdpp/subset.hpp"
#include "nsdpp/types.hpp"

namespace nsdpp {

/// Which object a matrix represents: a correlation kernel K, where
/// P(S subset X) = det(K_S), or an L-ensemble kernel L, where
/// P(X = S) = det(L_S) / det(I + L).
enum class KernelRole { Correlation, LEnsemble };

/// Dense square real kernel. Immutable after construction; construction
/// rejects non-square and non-finite input. n >= 1.
class Kernel {
 public:
  Kernel(Matrix entries, KernelRole role);

  Index size() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  KernelRole role() const { return role_; }

 private:
  Matrix entries_;
  KernelRole role_;
};

Kernel correlation(Matrix entries);
Kernel lensemble(Matrix entries);

/// Full distribution over P([n]): probs[m] is the probability of the subset
/// with bitmask m (bit i set iff element i present). Size 2^n.
struct ProbabilityTable {
  int n = 0;
  std::vector<Real> probs;
};

/// Determinant by LU with partial pivoting; the 0x0 determinant is 1.
Real determinant(const Matrix& m);

Matrix submatrix(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols);
Matrix principal_submatrix(const Matrix& m, const SubsetMask& s);

/// det of the principal submatrix of the kernel indexed by s.
Real principal_minor(const Kernel& k, const SubsetMask& s);
Real principal_minor(const Matrix& m, const SubsetMask& s);

/// Row blend D(p)(I - K) + D(1-p) K: row i of the result is
/// p_i * e_i + (1 - 2 p_i) * (row i of K). Exact when p_i is 0 or 1 (rows are
/// copied or negated entrywise, plus a single diagonal add).
Matrix blend_rows(const Matrix& k, const Vector& p);

/// L = K (I - K)^{-1}. Refuses when 1/|det(I - K)| exceeds 1e12.
Kernel k_to_l(const Kernel& k);

/// K = L (I + L)^{-1}. Refuses when 1/|det(I + L)| exceeds 1e12.
Kernel l_to_k(const Kernel& l);

/// P(X = s) = det(D(1_{s^c})(I - K) + D(1_s) K): rows in s come from K,
/// rows outside s from I - K.
Real set_probability(const Kernel& k, const SubsetMask& s);

/// Self-test of the determinant plumbing: |sum_S det(M_S) - det(I + M)|.
Real sum_minor_identity_check(const Kernel& k, int cap = kDefaultEnumerationCap);

}  // namespace nsdpp
