#include "nsdpp/sampling.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "nsdpp/oracle.hpp"
#include "nsdpp/parallel.hpp"

namespace nsdpp {

namespace {

constexpr Real kProbBand = 1e-8;   // tolerated overshoot of conditional probabilities
constexpr Real kPivotEps = 1e-12;  // below this a pivot counts as degenerate

}  // namespace

Real sequential_inclusion_probability(const Matrix& a, Index i) {
  const Real p = a(i, i);
  if (p < -kProbBand || p > 1.0 + kProbBand)
    fail(Errc::probability_range, "conditional inclusion probability outside [0, 1] band");
  return std::clamp(p, 0.0, 1.0);
}

void apply_sequential_pivot(Matrix& a, Index i, bool include) {
  const Index n = a.rows();
  const Real d = include ? a(i, i) : a(i, i) - 1.0;
  const Index m = n - i - 1;
  if (m <= 0) return;
  if (std::abs(d) >= kPivotEps) {
    a.bottomRightCorner(m, m).noalias() -= a.block(i + 1, i, m, 1) * a.block(i, i + 1, 1, m) / d;
    return;
  }
  // Degenerate pivot: the conditional kernel is deterministic along this
  // coordinate. Updates with a vanishing numerator are exact zeros (0/0 -> 0);
  // anything else means the decision had probability ~0.
  for (Index r = i + 1; r < n; ++r) {
    for (Index c = i + 1; c < n; ++c) {
      const Real numerator = a(r, i) * a(i, c);
      if (std::abs(numerator) >= kPivotEps)
        fail(Errc::pivot_breakdown, "degenerate pivot with non-negligible coupling");
    }
  }
}

namespace {

std::vector<int> run_sequential(Matrix a, RngStream& rng) {
  const Index n = a.rows();
  std::vector<int> members;
  for (Index i = 0; i < n; ++i) {
    const Real p = sequential_inclusion_probability(a, i);
    const bool include = rng.next_double() < p;
    if (include) members.push_back(static_cast<int>(i));
    apply_sequential_pivot(a, i, include);
  }
  return members;
}

}  // namespace

SubsetSample sample_sequential(const Kernel& k, std::uint64_t seed, std::uint64_t sample_index) {
  if (k.role() != KernelRole::Correlation)
    fail(Errc::domain, "sequential sampler expects a correlation kernel");
  RngStream rng(seed, sample_index);
  SubsetSample s;
  s.n = static_cast<int>(k.size());
  s.seed = seed;
  s.method = SampleMethod::Sequential;
  s.members = run_sequential(k.entries(), rng);
  return s;
}

namespace {

std::vector<int> draw_from_table(const ProbabilityTable& table, RngStream& rng) {
  const Real u = rng.next_double();
  Real acc = 0.0;
  std::uint64_t chosen = table.probs.size() - 1;
  for (std::size_t mask = 0; mask < table.probs.size(); ++mask) {
    acc += std::max(table.probs[mask], 0.0);
    if (u < acc) {
      chosen = mask;
      break;
    }
  }
  std::vector<int> members;
  for (int i = 0; i < table.n; ++i)
    if (chosen & (std::uint64_t(1) << i)) members.push_back(i);
  return members;
}

ProbabilityTable enumeration_table_checked(const Kernel& k, int cap) {
  ProbabilityTable table = enumerate_distribution(k, cap);
  const Real tol = minor_tolerance(k.entries());
  for (Real p : table.probs)
    if (p < -tol) fail(Errc::negative_mass, "distribution table has negative mass");
  return table;
}

}  // namespace

SubsetSample sample_enumeration(const Kernel& k, std::uint64_t seed, std::uint64_t sample_index,
                                int cap) {
  ProbabilityTable table = enumeration_table_checked(k, cap);
  RngStream rng(seed, sample_index);
  SubsetSample s;
  s.n = table.n;
  s.seed = seed;
  s.method = SampleMethod::Enumeration;
  s.members = draw_from_table(table, rng);
  return s;
}

namespace {

std::vector<int> run_half_identity(const Vector& u, const Vector& v, RngStream& rng) {
  const int n = static_cast<int>(u.size());
  // Uniform subset, then keep or complement with the closed-form probability.
  std::vector<bool> in_set(static_cast<std::size_t>(n));
  Real signed_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const bool bit = rng.next_u64() & 1;
    in_set[static_cast<std::size_t>(i)] = bit;
    const Real prod = u(i) * v(i);
    signed_sum += bit ? prod : -prod;
  }
  const Real keep = 0.5 * (1.0 + signed_sum);
  const bool flip = !(rng.next_double() < keep);
  std::vector<int> members;
  for (int i = 0; i < n; ++i)
    if (in_set[static_cast<std::size_t>(i)] != flip) members.push_back(i);
  return members;
}

}  // namespace

SubsetSample sample_half_identity_rank_one(const Vector& u, const Vector& v, std::uint64_t seed,
                                           std::uint64_t sample_index) {
  if (u.size() != v.size()) fail(Errc::dim_mismatch, "u and v must have equal length");
  if (u.cwiseProduct(v).cwiseAbs().sum() > 1.0 + 1e-12)
    fail(Errc::domain, "half-identity sampler needs sum |u_i v_i| <= 1");
  RngStream rng(seed, sample_index);
  SubsetSample s;
  s.n = static_cast<int>(u.size());
  s.seed = seed;
  s.method = SampleMethod::HalfIdentityRankOne;
  s.members = run_half_identity(u, v, rng);
  return s;
}

MixingDecomposition mixing_decomposition(const Matrix& m) {
  if (m.rows() != m.cols()) fail(Errc::dim_mismatch, "mixing decomposition of a non-square matrix");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  MixingDecomposition out{svd.matrixU(), svd.matrixV(), svd.singularValues()};
  for (Index i = 0; i < out.sigma.size(); ++i) {
    if (out.sigma(i) > 1.0 + 1e-9)
      fail(Errc::domain, "mixing requires singular values <= 1 (||M||_2 <= 1)");
    out.sigma(i) = std::min(out.sigma(i), 1.0);
  }
  const Real residual =
      (out.p_left * out.sigma.asDiagonal() * out.q_right.transpose() - m).cwiseAbs().maxCoeff();
  if (residual > 1e-9) fail(Errc::numeric_failure, "SVD reconstruction residual too large");
  return out;
}

namespace {

std::vector<int> run_mixing(const MixingDecomposition& m, RngStream& rng) {
  const Index n = m.sigma.size();
  Vector bits(n);
  for (Index i = 0; i < n; ++i) bits(i) = rng.bernoulli(m.sigma(i)) ? 1.0 : 0.0;
  Matrix kernel = 0.5 * (m.p_left * bits.asDiagonal() * m.q_right.transpose());
  kernel.diagonal().array() += 0.5;
  return run_sequential(std::move(kernel), rng);
}

}  // namespace

SubsetSample sample_mixing(const MixingDecomposition& m, std::uint64_t seed,
                           std::uint64_t sample_index) {
  RngStream rng(seed, sample_index);
  SubsetSample s;
  s.n = static_cast<int>(m.sigma.size());
  s.seed = seed;
  s.method = SampleMethod::Mixing;
  s.members = run_mixing(m, rng);
  return s;
}

namespace {

template <typename OneSample>
std::vector<SubsetSample> batch(int num, int threads, OneSample&& one) {
  if (num < 0) fail(Errc::domain, "sample count must be nonnegative");
  std::vector<SubsetSample> out(static_cast<std::size_t>(num));
  parallel_for(
      num,
      [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i)
          out[static_cast<std::size_t>(i)] = one(static_cast<std::uint64_t>(i));
      },
      threads);
  return out;
}

}  // namespace

std::vector<SubsetSample> sample_batch_sequential(const Kernel& k, int num, std::uint64_t seed,
                                                  int threads) {
  return batch(num, threads, [&](std::uint64_t i) { return sample_sequential(k, seed, i); });
}

std::vector<SubsetSample> sample_batch_enumeration(const Kernel& k, int num, std::uint64_t seed,
                                                   int threads, int cap) {
  // Build the table once; draws share it read-only.
  ProbabilityTable table = enumeration_table_checked(k, cap);
  return batch(num, threads, [&](std::uint64_t i) {
    RngStream rng(seed, i);
    SubsetSample s;
    s.n = table.n;
    s.seed = seed;
    s.method = SampleMethod::Enumeration;
    s.members = draw_from_table(table, rng);
    return s;
  });
}

std::vector<SubsetSample> sample_batch_half_identity(const Vector& u, const Vector& v, int num,
                                                     std::uint64_t seed, int threads) {
  if (u.size() != v.size()) fail(Errc::dim_mismatch, "u and v must have equal length");
  if (u.cwiseProduct(v).cwiseAbs().sum() > 1.0 + 1e-12)
    fail(Errc::domain, "half-identity sampler needs sum |u_i v_i| <= 1");
  return batch(num, threads, [&](std::uint64_t i) {
    RngStream rng(seed, i);
    SubsetSample s;
    s.n = static_cast<int>(u.size());
    s.seed = seed;
    s.method = SampleMethod::HalfIdentityRankOne;
    s.members = run_half_identity(u, v, rng);
    return s;
  });
}

std::vector<SubsetSample> sample_batch_mixing(const MixingDecomposition& m, int num,
                                              std::uint64_t seed, int threads) {
  return batch(num, threads, [&](std::uint64_t i) { return sample_mixing(m, seed, i); });
}

void write_samples_csv(const std::string& path, const std::vector<SubsetSample>& samples) {
  std::ofstream out(path);
  if (!out) fail(Errc::domain, "cannot open " + path + " for writing");
  out << "# sample_id,space-separated member indices (0-based)\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << i << ',';
    const std::vector<int>& m = samples[i].members;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out << ' ';
      out << m[j];
    }
    out << "\n";
  }
}

}  // namespace nsdpp
