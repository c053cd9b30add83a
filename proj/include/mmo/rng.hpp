// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace mmo {

// SplitMix64 finalizer, used to spread structured stream labels into
// well-separated 64-bit seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed of the substream identified by (master, a, b, c). Substreams are
// independent of how many other streams were opened before them, so
// per-realization results do not depend on worker count or run length.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0)
{
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc908ULL);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    s = splitmix64(s ^ c);
    return s;
}

inline std::mt19937_64 make_rng(std::uint64_t seed)
{
    return std::mt19937_64(seed);
}

} // namespace mmo
