#pragma once

#include <cstdint>
#include <string_view>

namespace pentaperm {

// Self-contained xoshiro256** generator. Reports must be byte-identical
// run-to-run and machine-to-machine, which rules out the standard-library
// distributions (their draw sequences are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) w = splitmix64(x);
  }

  uint64_t next() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform over [0, 2^bits); bits <= 64.
  uint64_t bits(int nbits) {
    if (nbits <= 0) return 0;
    return next() >> (64 - nbits);
  }

  // Uniform over [0, n) by rejection.
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    int nb = 64 - __builtin_clzll(n - 1);
    uint64_t v;
    do { v = bits(nb); } while (v >= n);
    return v;
  }

  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Named stream derivation: one independent stream per (command, m, name) so
// worker fan-out cannot perturb which points a given check samples.
inline uint64_t derive_seed(uint64_t root_seed, std::string_view command, int m,
                            std::string_view name = "") {
  uint64_t x = root_seed ^ (0x5851f42d4c957f2dULL * static_cast<uint64_t>(m + 1));
  x ^= fnv1a(command);
  uint64_t h = Rng::splitmix64(x);
  x ^= fnv1a(name) + h;
  return Rng::splitmix64(x);
}

}  // namespace pentaperm
