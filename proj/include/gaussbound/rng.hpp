#pragma once

#include <cstdint>

namespace gaussbound::rng {

// Name recorded in Monte-Carlo estimates for provenance.
inline constexpr const char* kAlgorithm = "splitmix64/mt19937_64";

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream seed for block `index` of a run seeded with `seed`. Distinct blocks
// get decorrelated engine seeds, so a run can be computed in any block order
// (or in parallel) and still combine deterministically.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return mix(seed + 0x632BE59BD9B4E019ull * (index + 1));
}

}  // namespace gaussbound::rng
