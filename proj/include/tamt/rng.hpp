#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace tamt {

// Project-wide deterministic RNG: xoshiro256++ seeded through SplitMix64.
//
// Every randomized operation takes a 64-bit master seed. Independent
// sub-streams derive from (seed, path) where path is a short integer
// sequence such as {track, note}; the derivation depends only on those
// values, never on draw order, so per-note randomness is reproducible
// even when notes are rendered in parallel.
class Rng {
 public:
  explicit Rng(uint64_t seed, std::initializer_list<uint64_t> path = {}) {
    uint64_t x = seed;
    for (uint64_t id : path) {
      x = mix(x ^ mix_const(id));
    }
    // SplitMix64 expansion into the xoshiro state.
    for (auto& s : s_) s = splitmix(x);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ull;
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi], inclusive, rejection-sampled (no modulo bias).
  int64_t uniform_int(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<int64_t>(next());  // full 64-bit range
    const uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return lo + static_cast<int64_t>(v % span);
  }

  // Standard normal via Box-Muller; draws exactly two uniforms per call
  // (no cached spare, keeps the draw count predictable).
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double gaussian(double mean, double sigma) { return mean + sigma * gaussian(); }

  // Fisher-Yates, platform-stable (std::shuffle is not reproducible
  // across standard library implementations).
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static uint64_t mix_const(uint64_t id) {
    return (id + 1) * 0x9e3779b97f4a7c15ull;
  }

  static uint64_t splitmix(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    return mix(x);
  }

  uint64_t s_[4];
};

}  // namespace tamt
