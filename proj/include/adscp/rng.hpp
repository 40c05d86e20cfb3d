#pragma once

#include <cstdint>
#include <random>

namespace adscp {

/// splitmix64 output for stream `index` of a base seed.  Counter-based:
/// derived seeds depend only on (seed, index), never on evaluation order.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Mersenne Twister engine for one derived stream of a base seed.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64_at(seed, stream));
}

} // namespace adscp
