#pragma once

#include <cstdint>

namespace levywalk {

// splitmix64: tiny full-period 64-bit generator. Fast enough to be the only
// RNG in the simulator, and its output function doubles as the mixer that
// derives independent per-sample substreams.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform on [0,1), 53 random bits
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform on (0,1); the half-bit offset keeps both endpoints unreachable,
  // so log() and division by the result stay finite
  double next_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
};

// Seed of the substream assigned to sample `index` under `master`. This is
// the index-th output of a splitmix64 stream started at `master`, which makes
// the assignment order-independent: worker counts and scheduling cannot
// change which random numbers a given sample sees.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master + index * 0x9e3779b97f4a7c15ull);
  return g.next();
}

}  // namespace levywalk
