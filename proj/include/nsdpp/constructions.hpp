#pragma once

#include <utility>

#include "nsdpp/spectrum.hpp"
#include "nsdpp/validation.hpp"

namespace nsdpp {

/// Coefficients c_0..c_{n-1} of the monic polynomial
/// P(X) = c_0 + c_1 X + ... + c_{n-1} X^{n-1} + X^n, all nonnegative.
struct CompanionSpec {
  Vector coeffs;
};

/// Expands prod_i (X + mu_i) over a conjugate-closed spectrum of intended
/// L-side eigenvalues into companion coefficients. Fails if a coefficient
/// comes out negative beyond roundoff.
CompanionSpec companion_from_lspectrum(const Spectrum& lspec);

/// Same, from intended K-side eigenvalues via mu = lambda / (1 - lambda).
CompanionSpec companion_from_kspectrum(const Spectrum& kspec);

/// Companion-shaped L-ensemble kernel: -1 on the superdiagonal, the
/// coefficients along the last row. Its distribution is supported on the
/// empty set and the suffix sets {k..n}.
Kernel companion_l(const CompanionSpec& spec);

/// Closed-form correlation kernel with the same distribution as
/// companion_l: rank-structured constant-column part minus the strict upper
/// triangle of ones.
Kernel companion_k(const CompanionSpec& spec);

/// The closed-form distribution shared by companion_l / companion_k:
/// mass c_{j}/(sum c + 1) on the suffix starting at index j (0-based) and
/// 1/(sum c + 1) on the empty set.
ProbabilityTable companion_distribution(const CompanionSpec& spec);

struct RankOneSpec {
  Vector u, v;
  Real lambda = 1.0;
};

/// K = lambda u v^T with <u, v> = 1 (within 1e-10, else NormalizationError).
/// Valid iff u_i v_i >= 0 for all i and lambda in [0, 1]; the verdict is
/// reported, never silently corrected.
std::pair<Kernel, ValidationReport> rank_one_kernel(const RankOneSpec& spec);

/// K = (I + u v^T) / 2. Valid iff sum_i |u_i v_i| <= 1.
std::pair<Kernel, ValidationReport> half_identity_rank_one(const Vector& u, const Vector& v);

/// Closed form P(X = s) = 2^{-n} (1 + sum_{i in s} u_i v_i - sum_{i not in s} u_i v_i).
Real half_identity_rank_one_set_probability(const Vector& u, const Vector& v, const SubsetMask& s);

/// Closed-form law of |X| for the half-identity rank-one family:
/// pmf[k] = 2^{-n} (C(n,k)(1 - <u,v>) + 2 C(n-1,k-1) <u,v>).
CardinalityLaw half_identity_rank_one_cardinality(const Vector& u, const Vector& v);

}  // namespace nsdpp
