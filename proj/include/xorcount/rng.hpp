#pragma once

#include <cstdint>
#include <random>

namespace xorcount {

// Stream contract (stable across platforms and releases):
//   * the engine is std::mt19937_64 seeded with the 64-bit seed directly;
//   * a Bernoulli(p) draw consumes one output u and yields (u >> 11) < p * 2^53;
//   * a fair coin consumes one output and yields its top bit.
// std::bernoulli_distribution is not used because its algorithm is
// implementation-defined.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Per-trial seed: seed XOR splitmix64(trial_index).
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) {
  return seed ^ splitmix64(trial_index);
}

/// Seed for a nested stream (e.g. one value of m inside a sweep). Mixed so
/// that stream(s, a) and trial(stream(s, b), k) do not collide for a != b.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(seed ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL));
}

class BitSource {
 public:
  explicit BitSource(std::uint64_t seed) : engine_(seed) {}

  bool bernoulli(double p) {
    const std::uint64_t u = engine_() >> 11;
    return static_cast<double>(u) < p * 9007199254740992.0;
  }
  bool coin() { return (engine_() >> 63) != 0; }
  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

}  // namespace xorcount
