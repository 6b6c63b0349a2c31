#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace rmc {

// SplitMix64 output for a given counter value. Stateless; used to whiten
// seeds and derive independent streams from (seed, index) style keys.
inline std::uint64_t splitmix64_at(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4a049bb133111ULL;
    return x ^ (x >> 31);
}

// Order-sensitive key mixer: derive_key(a, b) != derive_key(b, a).
inline std::uint64_t derive_key(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64_at(a);
    h = splitmix64_at(h ^ (b + 0x9e3779b97f4a7c15ULL));
    h = splitmix64_at(h ^ (c + 0x9e3779b97f4a7c15ULL));
    return h;
}

inline std::mt19937_64 make_engine(std::uint64_t key) { return std::mt19937_64(key); }

// Uniform double in [0, 1) with 53 random bits; bit-stable across platforms,
// unlike the distribution classes.
inline double uniform_unit(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; n >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
    for (;;) {
        const std::uint64_t v = g();
        if (v < limit) return v % n;
    }
}

template <typename T>
void shuffle_vector(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(uniform_below(g, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace rmc
