#include "nsdpp/subset.hpp"

#include <algorithm>

namespace nsdpp {

SubsetMask::SubsetMask(int n, std::vector<int> members) : n_(n), members_(std::move(members)) {
  if (n < 0) fail(Errc::domain, "subset ground-set size must be nonnegative");
  std::sort(members_.begin(), members_.end());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 0 || members_[i] >= n_)
      fail(Errc::index_out_of_range, "subset member outside [0, n)");
    if (i > 0 && members_[i] == members_[i - 1]) fail(Errc::domain, "duplicate subset member");
  }
}

SubsetMask SubsetMask::empty_set(int n) { return SubsetMask(n, {}); }

SubsetMask SubsetMask::full_set(int n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
  return SubsetMask(n, std::move(all));
}

SubsetMask SubsetMask::from_bits(int n, std::uint64_t bits) {
  if (n > 63) fail(Errc::domain, "bitmask subsets limited to n <= 63");
  std::vector<int> members;
  for (int i = 0; i < n; ++i)
    if (bits & (std::uint64_t(1) << i)) members.push_back(i);
  if (bits >> n) fail(Errc::index_out_of_range, "bitmask has bits beyond the ground set");
  return SubsetMask(n, std::move(members));
}

bool SubsetMask::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

std::uint64_t SubsetMask::bits() const {
  if (n_ > 63) fail(Errc::domain, "bitmask subsets limited to n <= 63");
  std::uint64_t b = 0;
  for (int i : members_) b |= std::uint64_t(1) << i;
  return b;
}

SubsetMask SubsetMask::complement() const {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n_) - members_.size());
  std::size_t pos = 0;
  for (int i = 0; i < n_; ++i) {
    if (pos < members_.size() && members_[pos] == i) {
      ++pos;
    } else {
      rest.push_back(i);
    }
  }
  return SubsetMask(n_, std::move(rest));
}

bool operator==(const SubsetMask& a, const SubsetMask& b) {
  return a.n() == b.n() && a.members() == b.members();
}

}  // namespace nsdpp
