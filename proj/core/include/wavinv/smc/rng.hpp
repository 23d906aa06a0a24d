#pragma once

#include <cstdint>
#include <random>

namespace wavinv::smc {

// Purpose tags so streams drawn for different jobs at the same
// (scale, step, particle) never coincide.
enum class Stream : std::uint64_t { prior = 1, extend = 2, move = 3, resample = 4, user = 5 };

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, Stream purpose, std::uint64_t scale, std::uint64_t step,
                                std::uint64_t particle) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ scale);
  h = splitmix64(h ^ step);
  return splitmix64(h ^ particle);
}

// Independent generator for one (seed, purpose, scale, step, particle) cell.
inline std::mt19937_64 keyed_rng(std::uint64_t seed, Stream purpose, std::uint64_t scale, std::uint64_t step,
                                 std::uint64_t particle) {
  return std::mt19937_64(stream_key(seed, purpose, scale, step, particle));
}

}  // namespace wavinv::smc
