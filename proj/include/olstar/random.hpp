#pragma once

#include <cstdint>
#include <random>

namespace olstar {

// splitmix64 finalizer. Used for seed derivation and position salts so that
// results do not depend on std library internals.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Deterministic substream seed for item `index` under a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 0x51ED2701ull));
}

// Uniform draw from [0, n). Hand-rolled (rejection-free modulo by widening
// multiply) so sequences are identical on every platform; n must be > 0.
inline std::uint32_t bounded(std::mt19937_64& rng, std::uint32_t n) {
    return static_cast<std::uint32_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Geometric count with the given mean (support 0, 1, 2, ...).
inline std::uint32_t geometric(std::mt19937_64& rng, double mean) {
    const double keep_going = mean / (mean + 1.0);
    std::uint32_t n = 0;
    while (uniform01(rng) < keep_going)
        ++n;
    return n;
}

} // namespace olstar
