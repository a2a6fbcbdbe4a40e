#pragma once

#include <cmath>
#include <cstdint>

namespace mstclu {

// splitmix64, used both as a seed sequencer and as the avalanche mixer for
// sketch level hashing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t x) {
  return splitmix64(x);
}

// Portable PRNG: xoshiro-free, just splitmix64 stream. Distributions are
// implemented by hand so output is byte-identical across platforms
// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0,1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::uint64_t uniform_int(std::uint64_t n) {
    // modulo bias is irrelevant for our n << 2^64
    return next_u64() % n;
  }

  // standard normal via Box-Muller, one value per call (second discarded for
  // reproducibility simplicity)
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // derive an independent child stream
  Rng fork(std::uint64_t salt) {
    std::uint64_t s = state_;
    return Rng(splitmix64(s) ^ mix64(salt));
  }

 private:
  std::uint64_t state_;
};

}  // namespace mstclu
