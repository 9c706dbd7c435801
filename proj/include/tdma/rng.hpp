#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tdma {

using Rng = std::mt19937_64;

/// Derives an independent generator from a run seed and a stream label.
inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream = {}) {
    // splitmix64 over (seed, stream...) so nearby seeds do not give
    // correlated engines.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    std::uint64_t h = mix(seed);
    for (auto s : stream) h = mix(h ^ mix(s));
    return Rng(h);
}

/// Uniform integer in [lo, hi]. Portable across standard libraries, unlike
/// std::uniform_int_distribution, so traces are reproducible everywhere.
inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());  // full 64-bit range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
}

/// Uniform double in [0, 1).
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool coin(Rng& rng, double p_true = 0.5) { return uniform_unit(rng) < p_true; }

}  // namespace tdma
