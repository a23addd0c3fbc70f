#pragma once

#include <cmath>
#include <cstdint>

namespace ayot {

/// Counter-based per-path random stream: the state is a pure function of
/// (seed, path index, draw counter), so estimates are reproducible bit for
/// bit regardless of how paths are scheduled across workers.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path_index) {
    state_ = mix(seed ^ 0x9e3779b97f4a7c15ull);
    state_ = mix(state_ ^ mix(path_index + 0x632be59bd9b4e019ull));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform in (0, 1) (never returns 0 or 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by Marsaglia polar; the spare is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }
  std::uint64_t state_ = 0;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace ayot
