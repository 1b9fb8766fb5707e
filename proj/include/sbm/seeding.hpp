#pragma once

#include <cstdint>
#include <initializer_list>

namespace sbm {

// SplitMix64 finalizer; the fixed hash behind all seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-row seed = chained splitmix64 over (base, part0, part1, ...). Stable
// across runs, so any single experiment row can be reproduced in isolation.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

}  // namespace sbm
