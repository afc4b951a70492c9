#pragma once

#include <cstdint>
#include <random>

// Deterministic random helpers. std::mt19937_64 output is pinned by the
// standard, but the std distributions are not, so sampling is done by hand
// to keep trained dictionaries byte-identical across toolchains.
namespace texseg {

using Rng = std::mt19937_64;

inline double rng_double(Rng& r) {
    return static_cast<double>(r() >> 11) * 0x1.0p-53;  // [0,1)
}

inline std::uint64_t rng_below(Rng& r, std::uint64_t n) {
    // rejection sampling, no modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = r();
    } while (v >= limit);
    return v % n;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed+stream
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace texseg
