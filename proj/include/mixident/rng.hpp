#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace mixident {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// SplitMix64 stream. Cheap to construct, so simulation keys one stream per
/// group index and search keys one per restart; results are then independent
/// of iteration order and parallelism.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) without modulo bias worth worrying about
  /// at the bounds used here (bound << 2^64).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

/// Independent stream for (seed, index); deterministic and order-free.
inline SplitMix64 keyed_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed) ^ mix64(mix64(index) + 0x632be59bd9b4e019ULL));
}

/// Flat Dirichlet draw: normalized exponentials.
inline std::vector<double> dirichlet_flat(SplitMix64& rng, int d) {
  std::vector<double> x(static_cast<std::size_t>(d));
  double total = 0.0;
  for (auto& xi : x) {
    xi = -std::log(1.0 - rng.uniform01());
    total += xi;
  }
  for (auto& xi : x) xi /= total;
  return x;
}

}  // namespace mixident
