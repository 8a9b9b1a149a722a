#pragma once

#include <cstdint>

namespace reachquant {

/// Deterministic 64-bit generator (splitmix64). Chosen over the standard
/// library distributions because its output stream is fixed by the algorithm,
/// not by the implementation, which keeps traces byte-identical across
/// toolchains. The algorithm name is recorded in trace headers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi) using the top 53 bits of the stream.
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  static constexpr const char* name() { return "splitmix64"; }

 private:
  std::uint64_t state_;
};

}  // namespace reachquant
