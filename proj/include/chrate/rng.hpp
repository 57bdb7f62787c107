#pragma once

#include <cmath>
#include <cstdint>

namespace chrate {

// Stateless counter-based random numbers. Every draw is a pure function of
// (key, counter), so a sample stream can be generated in any order by any
// thread and still match a serial run bit for bit.

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0x9e3779b97f4a7c15ull + 1));
}

// Uniform in (0,1); never returns 0 or 1.
inline double counter_uniform(std::uint64_t key, std::uint64_t counter) {
  std::uint64_t bits = splitmix64(key ^ splitmix64(counter + 0x853c49e6748fea9bull));
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

// Standard normal via Box-Muller; one value per counter.
inline double counter_normal(std::uint64_t key, std::uint64_t counter) {
  double u1 = counter_uniform(key, 2 * counter);
  double u2 = counter_uniform(key, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace chrate
