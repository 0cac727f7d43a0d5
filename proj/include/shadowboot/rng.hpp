#ifndef SHADOWBOOT_RNG_HPP_
#define SHADOWBOOT_RNG_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>

namespace shadowboot {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent engine for stream `index` under `master`. Streams depend only on
// (master, index), so work can be split across threads in any way.
inline Engine substream(std::uint64_t master, std::uint64_t index) {
  return Engine(splitmix64(splitmix64(master) ^ splitmix64(~index)));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection (no modulo bias). The mapping is
// fixed here rather than left to std::uniform_int_distribution, whose output
// differs between standard library implementations.
inline std::uint64_t uniform_below(Engine &rng, std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("uniform_below: empty range");
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x = rng();
  while (x >= limit) {
    x = rng();
  }
  return x % n;
}

} // namespace shadowboot

#endif // SHADOWBOOT_RNG_HPP_
