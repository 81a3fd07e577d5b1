#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace roadsight {

// Deterministic RNG helpers. std::mt19937_64 output is pinned by the standard,
// but the std distributions are not, so bounded draws and shuffles are done by
// hand to keep seeded runs byte-identical across compilers.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent generator for stream `stream` of master seed `seed`.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(~stream)));
}

/// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
inline std::uint64_t rng_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

/// Uniform double in [0, 1) with 53 bits of precision.
inline double rng_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates shuffle with pinned draw order.
template <typename T>
void rng_shuffle(std::mt19937_64& g, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng_below(g, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace roadsight
