#pragma once

#include <cstdint>
#include <random>

namespace parl {

using Rng = std::mt19937_64;

// SplitMix64 step; used to derive stream seeds so that sub-streams
// (per rollout, per episode, ...) are decorrelated and reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
    return splitmix64(base ^ splitmix64(a));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(base, a, b), c);
}

// Uniform double in [0,1) built from the top 53 bits; avoids the
// implementation-defined behaviour of std::uniform_real_distribution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], inclusive. Deterministic across platforms.
inline long long uniform_int(Rng& rng, long long lo, long long hi) {
    if (hi <= lo) return lo;
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return lo + static_cast<long long>(draw % span);
}

}  // namespace parl
