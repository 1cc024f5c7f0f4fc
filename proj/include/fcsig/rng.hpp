#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "fcsig/stats.hpp"

namespace fcsig {

// SplitMix64 finalizer; bijective scrambling of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic RNG stream addressed by a master seed plus a path of
// counters. Streams with distinct paths are independent for simulation
// purposes, and the mapping does not depend on thread scheduling, so any
// worker may own any stream. Uniform and normal draws consume exactly one
// engine step each.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream derive(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
    return RngStream(h);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0,1), 53-bit resolution, never exactly 0 or 1.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() { return normal_quantile(uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fcsig
