#pragma once

// Seed derivation for per-trajectory random streams. Each trajectory gets its
// own engine seeded from (master seed, stream index), so estimates are
// reproducible for a fixed seed no matter how trajectories are scheduled
// across workers.

#include <cstdint>

namespace levydos {

// splitmix64 step: the standard 64-bit finaliser, good enough to decorrelate
// consecutive seeds and recommended for seeding heavier engines.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t h = splitmix64_next(s);
    s = h ^ (index * 0x9e3779b97f4a7c15ULL);
    splitmix64_next(s);
    return splitmix64_next(s);
}

}  // namespace levydos
