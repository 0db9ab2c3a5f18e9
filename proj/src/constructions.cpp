#include "nsdpp/constructions.hpp"

#include <cmath>
#include <cstdint>

namespace nsdpp {

namespace {

void check_nonneg_coeffs(const Vector& coeffs) {
  for (Index i = 0; i < coeffs.size(); ++i)
    if (!(coeffs(i) >= 0.0)) fail(Errc::domain, "companion coefficients must be nonnegative");
}

// Binomial coefficient as a real; 0 outside 0 <= j <= m.
Real binom(int m, int j) {
  if (j < 0 || j > m || m < 0) return 0.0;
  j = std::min(j, m - j);
  Real r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (m - j + i) / i;
  return r;
}

}  // namespace

CompanionSpec companion_from_lspectrum(const Spectrum& lspec) {
  auto [reals, pairs] = split_conjugate_pairs(lspec);
  // prod(X + mu): real mu -> (mu + X); pair -> (|mu|^2 + 2 Re(mu) X + X^2).
  std::vector<Real> acc{1.0};
  auto mul = [&acc](const std::vector<Real>& f) {
    std::vector<Real> out(acc.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += acc[i] * f[j];
    acc = std::move(out);
  };
  for (Real mu : reals) mul({mu, 1.0});
  for (const Complex& mu : pairs) mul({std::norm(mu), 2.0 * mu.real(), 1.0});

  const std::size_t n = acc.size() - 1;
  Real scale = 1.0;
  for (std::size_t j = 0; j <= n; ++j) scale = std::max(scale, std::abs(acc[j]));
  Vector coeffs(static_cast<Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    Real c = acc[j];
    if (c < 0.0) {
      if (c < -1e-9 * scale)
        fail(Errc::domain, "spectrum expands to a negative companion coefficient");
      c = 0.0;
    }
    coeffs(static_cast<Index>(j)) = c;
  }
  return {std::move(coeffs)};
}

CompanionSpec companion_from_kspectrum(const Spectrum& kspec) {
  Spectrum lspec{kspec.values};
  for (Index i = 0; i < lspec.values.size(); ++i) {
    const Complex lam = lspec.values(i);
    const Complex denom = Complex(1.0, 0.0) - lam;
    if (std::abs(denom) < 1e-12) fail(Errc::domain, "eigenvalue 1 has no L-side image");
    lspec.values(i) = lam / denom;
  }
  return companion_from_lspectrum(lspec);
}

Kernel companion_l(const CompanionSpec& spec) {
  check_nonneg_coeffs(spec.coeffs);
  const Index n = spec.coeffs.size();
  if (n < 1) fail(Errc::domain, "companion spec must have at least one coefficient");
  Matrix l = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) l(i, i + 1) = -1.0;
  l.row(n - 1) = spec.coeffs.transpose();
  return lensemble(std::move(l));
}

Kernel companion_k(const CompanionSpec& spec) {
  check_nonneg_coeffs(spec.coeffs);
  const Index n = spec.coeffs.size();
  if (n < 1) fail(Errc::domain, "companion spec must have at least one coefficient");
  const Real denom = spec.coeffs.sum() + 1.0;
  Matrix k(n, n);
  Real partial = 0.0;
  for (Index j = 0; j < n; ++j) {
    partial += spec.coeffs(j);
    k.col(j).setConstant(partial / denom);
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) k(i, j) -= 1.0;
  return correlation(std::move(k));
}

ProbabilityTable companion_distribution(const CompanionSpec& spec) {
  check_nonneg_coeffs(spec.coeffs);
  const int n = static_cast<int>(spec.coeffs.size());
  if (n > kDefaultEnumerationCap) fail(Errc::cap_exceeded, "companion table above enumeration cap");
  const Real denom = spec.coeffs.sum() + 1.0;
  ProbabilityTable table;
  table.n = n;
  table.probs.assign(std::size_t(1) << n, 0.0);
  table.probs[0] = 1.0 / denom;
  // Suffix starting at 0-based index j has bits j..n-1 set.
  for (int j = 0; j < n; ++j) {
    const std::uint64_t mask = ((std::uint64_t(1) << n) - 1) & ~((std::uint64_t(1) << j) - 1);
    table.probs[mask] = spec.coeffs(j) / denom;
  }
  return table;
}

std::pair<Kernel, ValidationReport> rank_one_kernel(const RankOneSpec& spec) {
  if (spec.u.size() != spec.v.size()) fail(Errc::dim_mismatch, "u and v must have equal length");
  if (spec.u.size() < 1) fail(Errc::domain, "rank-one spec needs dimension >= 1");
  const Real dot = spec.u.dot(spec.v);
  if (std::abs(dot - 1.0) > 1e-10)
    fail(Errc::normalization_error, "rank-one spec requires <u, v> = 1");

  Matrix k = spec.lambda * (spec.u * spec.v.transpose());

  ValidationReport report;
  report.method = Method::ClosedForm;
  report.tolerance = 1e-12;
  Real min_product = std::numeric_limits<Real>::infinity();
  for (Index i = 0; i < spec.u.size(); ++i)
    min_product = std::min(min_product, spec.u(i) * spec.v(i));
  report.min_value = min_product;
  const bool valid = min_product >= -1e-12 && spec.lambda >= 0.0 && spec.lambda <= 1.0;
  report.verdict = valid ? Verdict::Valid : Verdict::Invalid;
  if (!valid) report.witness_vector = spec.u.cwiseProduct(spec.v);  // re-checkable sign pattern
  return {correlation(std::move(k)), report};
}

std::pair<Kernel, ValidationReport> half_identity_rank_one(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) fail(Errc::dim_mismatch, "u and v must have equal length");
  if (u.size() < 1) fail(Errc::domain, "half-identity spec needs dimension >= 1");
  Matrix k = 0.5 * (u * v.transpose());
  k.diagonal().array() += 0.5;

  const Real abs_sum = u.cwiseProduct(v).cwiseAbs().sum();
  ValidationReport report;
  report.method = Method::ClosedForm;
  report.tolerance = 1e-12;
  report.min_value = 1.0 - abs_sum;
  report.verdict = abs_sum <= 1.0 + 1e-12 ? Verdict::Valid : Verdict::Invalid;
  if (report.verdict == Verdict::Invalid) report.witness_vector = u.cwiseProduct(v);
  return {correlation(std::move(k)), report};
}

Real half_identity_rank_one_set_probability(const Vector& u, const Vector& v,
                                            const SubsetMask& s) {
  if (u.size() != v.size()) fail(Errc::dim_mismatch, "u and v must have equal length");
  if (s.n() != u.size()) fail(Errc::dim_mismatch, "subset ground set does not match vectors");
  const int n = s.n();
  Real signed_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Real prod = u(i) * v(i);
    signed_sum += s.contains(i) ? prod : -prod;
  }
  return std::ldexp(1.0 + signed_sum, -n);
}

CardinalityLaw half_identity_rank_one_cardinality(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) fail(Errc::dim_mismatch, "u and v must have equal length");
  const int n = static_cast<int>(u.size());
  if (n < 1) fail(Errc::domain, "half-identity spec needs dimension >= 1");
  const Real abs_sum = u.cwiseProduct(v).cwiseAbs().sum();
  if (abs_sum > 1.0 + 1e-12)
    fail(Errc::domain, "half-identity cardinality needs sum |u_i v_i| <= 1");
  const Real dot = u.dot(v);

  Vector pmf(n + 1);
  for (int k = 0; k <= n; ++k)
    pmf(k) = std::ldexp(binom(n, k) * (1.0 - dot) + 2.0 * binom(n - 1, k - 1) * dot, -n);

  // Spectrum of (I + u v^T)/2: (1 + <u,v>)/2 once, 1/2 with multiplicity n-1.
  ComplexVector values(n);
  values.setConstant(Complex(0.5, 0.0));
  values(0) = Complex(0.5 * (1.0 + dot), 0.0);
  return {std::move(pmf), Spectrum{std::move(values)}};
}

}  // namespace nsdpp
