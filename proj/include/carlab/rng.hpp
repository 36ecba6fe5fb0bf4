#pragma once

#include <cstdint>

namespace carlab {

// Counter-based generator: draw k is a hash of (base, k), so a stream can be
// split into independent sub-streams without sharing mutable state. Output is
// identical across platforms and parallel schedules.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : base_(seed) {}

  std::uint64_t next_u64() { return mix(base_ + (++counter_) * kGamma); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform integer in {0, ..., n-1}; n must be positive.
  std::uint64_t below(std::uint64_t n);

  // Independent sub-stream; deterministic in (seed, stream).
  SplitRng split(std::uint64_t stream) const {
    return SplitRng(mix(base_ ^ mix(stream + kGamma2)));
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  static constexpr std::uint64_t kGamma2 = 0xd1b54a32d192ed03ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

}  // namespace carlab
