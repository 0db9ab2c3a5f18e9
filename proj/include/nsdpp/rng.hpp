#pragma once

#include <cstdint>

namespace nsdpp {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Counter-based pseudo-random stream. The value sequence is a pure function
/// of (seed, stream): stream s of a batch seed always yields the same draws,
/// independent of thread count or evaluation order. splitmix64 core.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : state_(detail::mix64(detail::mix64(seed + 0x9E3779B97F4A7C15ull) ^
                             (stream * 0xD1342543DE82EF95ull + 0x632BE59BD9B4E019ull))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1): 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

 private:
  std::uint64_t state_;
};

}  // namespace nsdpp
