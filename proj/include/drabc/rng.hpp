#pragma once

#include <cstdint>
#include <random>

namespace drabc {

using Rng = std::mt19937_64;

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-derived sub-seed: independent streams from one master seed.
// Parallel workers each seed their own engine with derive_seed(master, stream, i),
// so results do not depend on scheduling or thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t counter = 0) {
    return mix64(mix64(master ^ mix64(stream)) ^ counter);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace drabc
