#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace evqe {

/// Seedable random stream built on mt19937_64 with hand-rolled transforms,
/// so that a given seed produces the same draws on every platform.
/// Substreams derived with derive() are statistically independent and may be
/// consumed concurrently; a single Rng must not be shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : base_(seed), engine_(mix(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (two u64 draws per call, no caching).
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  int rademacher() { return (next_u64() & 1u) ? 1 : -1; }

  /// Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::swap(p[i - 1], p[index(i)]);
    }
    return p;
  }

  /// Independent substream keyed on (k1, k2, k3), a pure function of this
  /// stream's original seed. Deriving does not disturb this stream.
  Rng derive(std::uint64_t k1, std::uint64_t k2 = 0,
             std::uint64_t k3 = 0) const {
    std::uint64_t s = base_;
    s = mix(s ^ (0x9e3779b97f4a7c15ULL + k1));
    s = mix(s ^ (0xbf58476d1ce4e5b9ULL + k2));
    s = mix(s ^ (0x94d049bb133111ebULL + k3));
    return Rng(s);
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t base_;
  std::mt19937_64 engine_;
};

}  // namespace evqe
