#pragma once

#include <cstdint>
#include <vector>

#include "nsdpp/types.hpp"

namespace nsdpp {

/// Subset of the ground set {0, ..., n-1}, stored as a strictly increasing
/// index list. Bitmask conversions use the canonical order: bit i set iff
/// element i is in the subset. All indices are 0-based.
class SubsetMask {
 public:
  SubsetMask(int n, std::vector<int> members);

  static SubsetMask empty_set(int n);
  static SubsetMask full_set(int n);
  static SubsetMask from_bits(int n, std::uint64_t bits);

  int n() const { return n_; }
  const std::vector<int>& members() const { return members_; }
  int count() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int i) const;
  std::uint64_t bits() const;  // requires n <= 63
  SubsetMask complement() const;

 private:
  int n_;
  std::vector<int> members_;
};

bool operator==(const SubsetMask& a, const SubsetMask& b);

}  // namespace nsdpp
