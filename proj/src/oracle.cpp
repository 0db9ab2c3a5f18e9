#include "nsdpp/oracle.hpp"

#include <cmath>

#include "nsdpp/parallel.hpp"

namespace nsdpp {

ProbabilityTable enumerate_distribution(const Kernel& k, int cap, int threads) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "enumerate_distribution expects a correlation kernel");
  const int n = static_cast<int>(k.size());
  if (n > cap) fail(Errc::cap_exceeded, "distribution enumeration above cap");

  ProbabilityTable table;
  table.n = n;
  table.probs.assign(std::size_t(1) << n, 0.0);
  parallel_for(
      static_cast<std::int64_t>(table.probs.size()),
      [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t mask = begin; mask < end; ++mask)
          table.probs[static_cast<std::size_t>(mask)] =
              set_probability(k, SubsetMask::from_bits(n, static_cast<std::uint64_t>(mask)));
      },
      threads);

  Real sum = 0.0;
  for (Real p : table.probs) sum += p;
  const Real tol = std::ldexp(minor_tolerance(k.entries()), n);
  if (std::abs(sum - 1.0) > tol)
    fail(Errc::numeric_failure, "set probabilities do not sum to 1 within tolerance");
  return table;
}

Real inclusion_consistency(const Kernel& k, int cap) {
  const int n = static_cast<int>(k.size());
  ProbabilityTable table = enumerate_distribution(k, cap);

  // Superset sums by the standard subset-sum transform, complemented:
  // F[S] = sum over T >= S of P(T).
  std::vector<Real> super(table.probs);
  for (int bit = 0; bit < n; ++bit) {
    const std::uint64_t b = std::uint64_t(1) << bit;
    for (std::uint64_t mask = 0; mask < super.size(); ++mask)
      if (!(mask & b)) super[mask] += super[mask | b];
  }

  Real worst = 0.0;
  for (std::uint64_t mask = 0; mask < super.size(); ++mask) {
    const Real minor = principal_minor(k.entries(), SubsetMask::from_bits(n, mask));
    worst = std::max(worst, std::abs(super[mask] - minor));
  }
  return worst;
}

Real tv_distance(const ProbabilityTable& a, const ProbabilityTable& b) {
  if (a.n != b.n) fail(Errc::dim_mismatch, "tables over different ground sets");
  Real sum = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) sum += std::abs(a.probs[i] - b.probs[i]);
  return 0.5 * sum;
}

Real tv_distance(const std::vector<std::uint64_t>& counts, const ProbabilityTable& b) {
  if (counts.size() != b.probs.size()) fail(Errc::dim_mismatch, "count vector size != table size");
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  if (total == 0) fail(Errc::domain, "empty empirical sample");
  Real sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i)
    sum += std::abs(static_cast<Real>(counts[i]) / static_cast<Real>(total) - b.probs[i]);
  return 0.5 * sum;
}

ProbabilityTable symmetric_difference_pushforward(const ProbabilityTable& table,
                                                  const SubsetMask& s) {
  if (s.n() != table.n) fail(Errc::dim_mismatch, "subset ground set does not match table");
  const std::uint64_t flip = s.bits();
  ProbabilityTable out;
  out.n = table.n;
  out.probs.assign(table.probs.size(), 0.0);
  for (std::uint64_t mask = 0; mask < table.probs.size(); ++mask)
    out.probs[mask ^ flip] = table.probs[mask];
  return out;
}

ProbabilityTable marginal_table(const ProbabilityTable& joint, int n, bool first_block) {
  if (joint.n != 2 * n) fail(Errc::dim_mismatch, "joint table is not over 2n points");
  ProbabilityTable out;
  out.n = n;
  out.probs.assign(std::size_t(1) << n, 0.0);
  const std::uint64_t low_mask = (std::uint64_t(1) << n) - 1;
  for (std::uint64_t mask = 0; mask < joint.probs.size(); ++mask) {
    const std::uint64_t part = first_block ? (mask & low_mask) : (mask >> n);
    out.probs[part] += joint.probs[mask];
  }
  return out;
}

}  // namespace nsdpp
