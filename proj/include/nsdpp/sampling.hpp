#pragma once

#include <cstdint>
#include <vector>

#include "nsdpp/kernel.hpp"
#include "nsdpp/rng.hpp"

namespace nsdpp {

enum class SampleMethod { Sequential, Enumeration, HalfIdentityRankOne, Mixing };

/// One exact draw from a DPP. members is sorted and 0-based; (kernel, seed,
/// method, sample index) fully determine the draw.
struct SubsetSample {
  int n = 0;
  std::vector<int> members;
  std::uint64_t seed = 0;
  SampleMethod method = SampleMethod::Sequential;
};

/// Singular value decomposition M = P D(sigma) Q^T used by the mixing
/// sampler; sigma is sorted descending and must lie in [0, 1].
struct MixingDecomposition {
  Matrix p_left;
  Matrix q_right;
  Vector sigma;
};

MixingDecomposition mixing_decomposition(const Matrix& m);

/// Applies one step of the sequential conditioning recursion to the working
/// matrix: pivot on index i with the given inclusion decision. The trailing
/// principal block becomes the kernel conditioned on that decision.
/// Throws ProbabilityRange if a(i,i) leaves [-1e-8, 1+1e-8]; near-zero
/// pivots follow the 0/0 -> 0 convention and throw PivotBreakdown when a
/// non-negligible numerator meets a negligible pivot.
void apply_sequential_pivot(Matrix& a, Index i, bool include);

/// Conditional probability used by the sequential sampler at step i,
/// clamped into [0, 1] (band check included).
Real sequential_inclusion_probability(const Matrix& a, Index i);

/// Exact sequential-conditioning sampler for a general correlation kernel.
/// sample_index selects the RNG stream within the batch seed.
SubsetSample sample_sequential(const Kernel& k, std::uint64_t seed, std::uint64_t sample_index = 0);

/// Inverse-CDF draw from the full 2^n table; the reference sampler.
SubsetSample sample_enumeration(const Kernel& k, std::uint64_t seed, std::uint64_t sample_index = 0,
                                int cap = kDefaultEnumerationCap);

/// Direct sampler for K = (I + u v^T)/2 with sum |u_i v_i| <= 1: draw a
/// uniform subset, keep it or flip to its complement with the closed-form
/// acceptance probability.
SubsetSample sample_half_identity_rank_one(const Vector& u, const Vector& v, std::uint64_t seed,
                                           std::uint64_t sample_index = 0);

/// Mixing sampler for K = (I + M)/2 with ||M||_2 <= 1: replaces the singular
/// values of M by Bernoulli draws and delegates to the sequential sampler.
SubsetSample sample_mixing(const MixingDecomposition& m, std::uint64_t seed,
                           std::uint64_t sample_index = 0);

// Batch variants: data-parallel over samples, one RNG stream per sample
// index, so results are identical for every thread count.
std::vector<SubsetSample> sample_batch_sequential(const Kernel& k, int num, std::uint64_t seed,
                                                  int threads = 0);
std::vector<SubsetSample> sample_batch_enumeration(const Kernel& k, int num, std::uint64_t seed,
                                                   int threads = 0,
                                                   int cap = kDefaultEnumerationCap);
std::vector<SubsetSample> sample_batch_half_identity(const Vector& u, const Vector& v, int num,
                                                     std::uint64_t seed, int threads = 0);
std::vector<SubsetSample> sample_batch_mixing(const MixingDecomposition& m, int num,
                                              std::uint64_t seed, int threads = 0);

void write_samples_csv(const std::string& path, const std::vector<SubsetSample>& samples);

}  // namespace nsdpp
