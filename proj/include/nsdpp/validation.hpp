#pragma once

#include <limits>
#include <optional>

#include "nsdpp/kernel.hpp"

namespace nsdpp {

enum class Verdict { Valid, Invalid, Unknown };

enum class Method {
  ExhaustiveMinors,
  Cara1,
  Cara2Randomized,
  Cara3Witness,
  SymmetricSpectrum,
  HalfIdentityNorm,
  DiagonalDominance,
  BlockTriangular,
  ClosedForm,  // family-specific certificates from the constructions module
  None,        // nothing applied; only paired with an Unknown verdict
};

/// Certification outcome. An Invalid verdict always carries a re-checkable
/// witness: a subset whose minor (or set probability) is below -tolerance,
/// an interior switch-probability vector with nonpositive determinant, or a
/// vector violating the coordinate test at every index. min_value records
/// the smallest determinant/minor/eigenvalue seen by exhaustive scans, so
/// near-zero boundary cases stay visible even on a Valid verdict.
struct ValidationReport {
  Verdict verdict = Verdict::Unknown;
  Method method = Method::ExhaustiveMinors;
  std::optional<SubsetMask> witness_subset;  // violating minors; for Cara1 the set {i : p_i = 1}
  std::optional<Vector> witness_vector;      // interior p, cara3 x, or offending eigenvector
  Real tolerance = 0.0;
  Real min_value = std::numeric_limits<Real>::quiet_NaN();
};

const char* to_string(Verdict v);
const char* to_string(Method m);

/// All 2^n principal minors of L nonnegative (up to the minor tolerance).
/// First violation in increasing bitmask order is reported.
ValidationReport is_p0_exhaustive(const Kernel& l, int cap = kDefaultEnumerationCap);

/// All 2^n set probabilities of K nonnegative: det(D(p)(I-K)+D(1-p)K) >= -tol
/// for every binary p, scanned in increasing bitmask order of {i : p_i = 1}.
ValidationReport is_dpp_cara1(const Kernel& k, int cap = kDefaultEnumerationCap);

/// Randomized interior test: samples p uniformly from (0,1)^n and reports
/// Invalid on a nonpositive determinant; otherwise Unknown (the randomized
/// test cannot certify validity).
ValidationReport is_dpp_cara2_randomized(const Kernel& k, int trials, std::uint64_t rng_seed);

/// True iff x certifies that K is not a DPP kernel: at every coordinate,
/// x_i (Kx)_i < 0, or |(Kx)_i| > |x_i|, or x_i = 0.
bool cara3_violation_check(const Kernel& k, const Vector& x);

/// Fast certificates, tried in order: symmetric spectrum (exact both ways
/// for symmetric input), ||I - 2K||_2 <= 1, row diagonal dominance of K and
/// I-K, then block-triangular decomposition with recursion on the diagonal
/// blocks. Unknown when none applies.
ValidationReport sufficient_conditions(const Kernel& k);

/// (1-t) K + t/2 I. Valid kernels stay valid for every t in [0, 1].
Kernel shrink_to_center(const Kernel& k, Real t);

/// Spectral norm by power iteration on M^T M (1e-12 relative convergence,
/// 10n iteration cap) with a full SVD fallback.
Real spectral_norm(const Matrix& m);

}  // namespace nsdpp
