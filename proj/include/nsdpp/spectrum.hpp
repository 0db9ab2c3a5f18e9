#pragma once

#include <utility>
#include <vector>

#include "nsdpp/kernel.hpp"

namespace nsdpp {

/// Full complex spectrum of a kernel, conjugate-closed: non-real values come
/// in conjugate pairs within 1e-9 * (1 + |lambda|).
struct Spectrum {
  ComplexVector values;
};

/// Distribution of the number of points. pmf[k] = P(|X| = k), k = 0..n.
struct CardinalityLaw {
  Vector pmf;
  Spectrum source_spectrum;
};

/// One independent summand of a point-count decomposition; pmf over
/// {0, ..., pmf.size()-1}.
struct CountComponent {
  Vector pmf;
};

Spectrum eigenvalues(const Kernel& k);

/// Splits a conjugate-closed spectrum into real values and upper-half-plane
/// representatives of the conjugate pairs.
std::pair<std::vector<Real>, std::vector<Complex>> split_conjugate_pairs(const Spectrum& s);

/// Per-eigenvalue membership in the admissible region for n x n correlation
/// kernels: the union of the two complex balls
/// B(1/2 +- i/(2 tan(pi/n)), 1/(2 sin(pi/n))), within 1e-9. For n = 1 the
/// region degenerates to [0, 1].
std::vector<bool> region_membership(const Spectrum& s, int n);

/// L-ensemble side: |arg(lambda)| <= pi - pi/n for nonzero eigenvalues.
std::vector<bool> lensemble_region_membership(const Spectrum& s, int n);

/// (E|X|, Var|X|) = (Tr K, Tr K - Tr K^2).
std::pair<Real, Real> expected_and_variance(const Kernel& k);

/// E[binomial(|X|, order)] = elementary symmetric polynomial of the
/// eigenvalues, computed from characteristic-polynomial coefficients.
Real factorial_moment(const Kernel& k, int order);

/// Exact pmf of |X| from the generating identity
/// sum_k P(|X|=k) z^k = det(I + (z-1)K) = prod_i (1 + (z-1) lambda_i).
/// Conjugate pairs are multiplied into real quadratic factors first; tiny
/// negative coefficients (>= -1e-9) are clamped and the pmf renormalized.
CardinalityLaw cardinality_law(const Kernel& k);

/// Decomposes |X| into independent summands: Bernoulli(lambda) per real
/// eigenvalue, and a {0,1,2}-valued component per conjugate pair mu with
/// probabilities (|mu-1|^2, (1-|2mu-1|^2)/2, |mu|^2). Requires real
/// eigenvalues in [0,1] and pairs in the closed ball B(1/2, 1/2).
std::vector<CountComponent> bernoulli_decomposition(const Spectrum& s);

/// Convolution of independent count components into one pmf.
Vector convolve_components(const std::vector<CountComponent>& components);

}  // namespace nsdpp
