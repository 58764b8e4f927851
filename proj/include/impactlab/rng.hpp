#pragma once

#include <cstdint>
#include <random>

namespace impactlab {

using Rng = std::mt19937_64;

// splitmix64 finalizer; mixes a parent seed with a stream index so that
// per-scenario / per-chunk streams do not depend on worker scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace impactlab
