#pragma once

#include <cstdint>
#include <cmath>

#include "trigzeros/common.hpp"

namespace trigzeros {

// splitmix64 step; used only to expand seeds into engine states.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoshiro256++ seeded from (seed, stream_kind, stream_index). A stream is a
// pure function of those three integers, so trial-parallel runs draw the same
// numbers regardless of thread count or scheduling.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_kind, std::uint64_t stream_index) {
    std::uint64_t x = seed;
    splitmix64_next(x);
    x ^= 0xA3EC647659359ACDull * (stream_kind + 1);
    splitmix64_next(x);
    x ^= 0xD6E8FEB86659FD93ull * (stream_index + 1);
    for (auto& w : s_) w = splitmix64_next(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0,1), never exactly 0 or 1.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Box-Muller pair. Fixed consumption of two uniforms per pair keeps coupled
  // streams aligned by draw index.
  void normal_pair(double& z0, double& z1) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    z0 = radius * std::cos(kTwoPi * u2);
    z1 = radius * std::sin(kTwoPi * u2);
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double a, b;
    normal_pair(a, b);
    cached_ = b;
    have_cached_ = true;
    return a;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Stream kinds; disjoint namespaces of the master seed.
namespace stream {
inline constexpr std::uint64_t paths = 1;
inline constexpr std::uint64_t jitter = 2;
inline constexpr std::uint64_t mc = 3;
inline constexpr std::uint64_t moments = 4;
inline constexpr std::uint64_t sinc = 5;
}  // namespace stream

}  // namespace trigzeros
