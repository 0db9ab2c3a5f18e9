#pragma once

#include <cstdint>
#include <vector>

#include "nsdpp/kernel.hpp"

namespace nsdpp {

/// Brute-force table of all 2^n set probabilities, in bitmask order. The sum
/// is checked against 1 (holds for any square K by multilinearity); failure
/// indicates broken determinant plumbing, not an invalid kernel.
ProbabilityTable enumerate_distribution(const Kernel& k, int cap = kDefaultEnumerationCap,
                                        int threads = 0);

/// max over subsets S of | sum_{T superset of S} P(X=T) - det(K_S) |.
Real inclusion_consistency(const Kernel& k, int cap = kDefaultEnumerationCap);

/// Total variation distance between two tables over the same ground set.
Real tv_distance(const ProbabilityTable& a, const ProbabilityTable& b);

/// TV distance of empirical outcome counts (normalized) against a table.
Real tv_distance(const std::vector<std::uint64_t>& counts, const ProbabilityTable& b);

/// Pushforward of a table under the set involution X -> X xor s.
ProbabilityTable symmetric_difference_pushforward(const ProbabilityTable& table,
                                                  const SubsetMask& s);

/// Marginal table of block 1 (low indices) or block 2 of a 2n-point table.
ProbabilityTable marginal_table(const ProbabilityTable& joint, int n, bool first_block);

}  // namespace nsdpp
