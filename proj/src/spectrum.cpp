#include "nsdpp/spectrum.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nsdpp {

namespace {

Real pair_tolerance(const Complex& z) { return 1e-9 * (1.0 + std::abs(z)); }

// Polynomial product; coefficients in ascending degree.
std::vector<Real> poly_mul(const std::vector<Real>& a, const std::vector<Real>& b) {
  std::vector<Real> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

struct RealFactor {
  std::vector<Real> coeffs;
  Real magnitude;  // |lambda| of the factor's eigenvalue(s), for ordering
};

// Expands a product with one factor per eigenvalue: a linear factor per real
// value, a real quadratic per conjugate pair. The callbacks supply each
// factor's coefficients in ascending degree.
template <typename FR, typename FP>
std::vector<Real> expand_spectrum(const Spectrum& s, FR&& factor_of_real, FP&& factor_of_pair) {
  auto [reals, pairs] = split_conjugate_pairs(s);
  std::vector<RealFactor> factors;
  factors.reserve(reals.size() + pairs.size());
  for (Real lam : reals) factors.push_back({factor_of_real(lam), std::abs(lam)});
  for (const Complex& mu : pairs) factors.push_back({factor_of_pair(mu), std::abs(mu)});
  // Ascending magnitude keeps the incremental products well scaled.
  std::sort(factors.begin(), factors.end(),
            [](const RealFactor& a, const RealFactor& b) { return a.magnitude < b.magnitude; });
  std::vector<Real> acc{1.0};
  for (const RealFactor& f : factors) acc = poly_mul(acc, f.coeffs);
  return acc;
}

}  // namespace

Spectrum eigenvalues(const Kernel& k) {
  Eigen::EigenSolver<Matrix> es(k.entries(), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) fail(Errc::convergence_failure, "eigensolver did not converge");
  Spectrum s{es.eigenvalues()};
  // Real Schur form already yields exact conjugate pairs; enforce the
  // documented invariant anyway so downstream pairing never drifts.
  for (Index i = 0; i < s.values.size(); ++i)
    if (std::abs(s.values(i).imag()) <= pair_tolerance(s.values(i)))
      s.values(i) = Complex(s.values(i).real(), 0.0);
  return s;
}

std::pair<std::vector<Real>, std::vector<Complex>> split_conjugate_pairs(const Spectrum& s) {
  std::vector<Real> reals;
  std::vector<Complex> pairs;
  std::vector<bool> used(static_cast<std::size_t>(s.values.size()), false);
  for (Index i = 0; i < s.values.size(); ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    const Complex z = s.values(i);
    if (std::abs(z.imag()) <= pair_tolerance(z)) {
      reals.push_back(z.real());
      used[static_cast<std::size_t>(i)] = true;
      continue;
    }
    Index partner = -1;
    for (Index j = i + 1; j < s.values.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (std::abs(std::conj(z) - s.values(j)) <= pair_tolerance(z)) {
        partner = j;
        break;
      }
    }
    if (partner < 0) fail(Errc::convergence_failure, "spectrum is not conjugate-closed");
    used[static_cast<std::size_t>(i)] = used[static_cast<std::size_t>(partner)] = true;
    pairs.push_back(z.imag() > 0 ? z : std::conj(z));
  }
  return {std::move(reals), std::move(pairs)};
}

std::vector<bool> region_membership(const Spectrum& s, int n) {
  if (n < 1) fail(Errc::domain, "ground-set size must be >= 1");
  const Real tol = 1e-9;
  std::vector<bool> out;
  out.reserve(static_cast<std::size_t>(s.values.size()));
  for (Index i = 0; i < s.values.size(); ++i) {
    const Complex z = s.values(i);
    bool inside;
    if (n == 1) {
      inside = std::abs(z.imag()) <= tol && z.real() >= -tol && z.real() <= 1.0 + tol;
    } else {
      const Real angle = std::numbers::pi / n;
      const Real center_im = 1.0 / (2.0 * std::tan(angle));
      const Real radius = 1.0 / (2.0 * std::sin(angle));
      const Complex up(0.5, center_im);
      const Complex down(0.5, -center_im);
      inside = std::abs(z - up) <= radius + tol || std::abs(z - down) <= radius + tol;
    }
    out.push_back(inside);
  }
  return out;
}

std::vector<bool> lensemble_region_membership(const Spectrum& s, int n) {
  if (n < 1) fail(Errc::domain, "ground-set size must be >= 1");
  const Real tol = 1e-9;
  const Real max_arg = std::numbers::pi - std::numbers::pi / n;
  std::vector<bool> out;
  out.reserve(static_cast<std::size_t>(s.values.size()));
  for (Index i = 0; i < s.values.size(); ++i) {
    const Complex z = s.values(i);
    out.push_back(std::abs(z) == 0.0 || std::abs(std::arg(z)) <= max_arg + tol);
  }
  return out;
}

std::pair<Real, Real> expected_and_variance(const Kernel& k) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "expected_and_variance expects a correlation kernel");
  const Matrix& m = k.entries();
  const Real mean = m.trace();
  const Real trace_sq = m.cwiseProduct(m.transpose()).sum();  // Tr(K^2)
  return {mean, mean - trace_sq};
}

Real factorial_moment(const Kernel& k, int order) {
  const int n = static_cast<int>(k.size());
  if (order < 0 || order > n) fail(Errc::domain, "factorial moment order must lie in [0, n]");
  // prod_i (t + lambda_i) = sum_k e_k t^{n-k}; coefficient of t^{n-order}.
  const std::vector<Real> coeffs = expand_spectrum(
      eigenvalues(k),
      [](Real lam) { return std::vector<Real>{lam, 1.0}; },
      [](const Complex& mu) {
        return std::vector<Real>{std::norm(mu), 2.0 * mu.real(), 1.0};
      });
  return coeffs[static_cast<std::size_t>(n - order)];
}

CardinalityLaw cardinality_law(const Kernel& k) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "cardinality_law expects a correlation kernel");
  Spectrum spec = eigenvalues(k);
  // Factor (1 + (z-1)lambda) per eigenvalue; conjugate pairs combine into
  // (1 - a + b) + (a - 2b) z + b z^2 with a = 2 Re(mu), b = |mu|^2.
  std::vector<Real> coeffs = expand_spectrum(
      spec,
      [](Real lam) { return std::vector<Real>{1.0 - lam, lam}; },
      [](const Complex& mu) {
        const Real a = 2.0 * mu.real();
        const Real b = std::norm(mu);
        return std::vector<Real>{1.0 - a + b, a - 2.0 * b, b};
      });

  Vector pmf = Vector::Zero(k.size() + 1);
  Real total = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    Real c = coeffs[j];
    if (c < -1e-6)
      fail(Errc::non_probability_output,
           "cardinality expansion produced a significantly negative coefficient; "
           "the kernel is not a valid DPP kernel");
    if (c < 0.0) c = 0.0;  // clamp roundoff in [-1e-6, 0); renormalized below
    pmf(static_cast<Index>(j)) = c;
    total += c;
  }
  if (total <= 0.0) fail(Errc::non_probability_output, "cardinality expansion has no mass");
  pmf /= total;
  return {std::move(pmf), std::move(spec)};
}

std::vector<CountComponent> bernoulli_decomposition(const Spectrum& s) {
  auto [reals, pairs] = split_conjugate_pairs(s);
  const Real tol = 1e-9;
  std::vector<CountComponent> out;
  out.reserve(reals.size() + pairs.size());
  for (Real lam : reals) {
    if (lam < -tol || lam > 1.0 + tol)
      fail(Errc::out_of_region, "real eigenvalue outside [0, 1]");
    const Real p = std::clamp(lam, 0.0, 1.0);
    Vector pmf(2);
    pmf << 1.0 - p, p;
    out.push_back({std::move(pmf)});
  }
  for (const Complex& mu : pairs) {
    const Real dist = std::abs(2.0 * mu - Complex(1.0, 0.0));
    if (dist > 1.0 + tol)
      fail(Errc::out_of_region, "conjugate pair outside the ball B(1/2, 1/2)");
    Vector pmf(3);
    pmf << std::norm(mu - Complex(1.0, 0.0)), std::max(0.5 * (1.0 - dist * dist), 0.0),
        std::norm(mu);
    out.push_back({std::move(pmf)});
  }
  return out;
}

Vector convolve_components(const std::vector<CountComponent>& components) {
  std::vector<Real> acc{1.0};
  for (const CountComponent& c : components) {
    std::vector<Real> pmf(c.pmf.data(), c.pmf.data() + c.pmf.size());
    acc = poly_mul(acc, pmf);
  }
  Vector out(static_cast<Index>(acc.size()));
  for (std::size_t i = 0; i < acc.size(); ++i) out(static_cast<Index>(i)) = acc[i];
  return out;
}

}  // namespace nsdpp
