#pragma once

#include <cmath>
#include <cstdint>

namespace telsim {

// Counter-based generator (splitmix64). Substreams are derived from
// (seed, shard) so results do not depend on how work is split across
// threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  Rng(std::uint64_t seed, std::uint64_t shard)
      : state_(mix(seed ^ mix(shard + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via the polar method; second value is cached.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double k = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * k;
    has_cached_ = true;
    return u * k;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // 128-bit multiply rejection-free bound is overkill here; modulo bias is
    // negligible for the n used (bootstrap resampling over sample counts).
    return next_u64() % n;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace telsim
