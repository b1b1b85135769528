#pragma once

#include <cmath>
#include <cstdint>

namespace exclusim {

// Counter-based random stream: the draw for (seed, tag, t, i) is a pure
// function, so any evaluation order (or parallel sweep layout) reproduces
// the same values.
enum class Stream : std::uint64_t {
    flow = 1,
    init = 2,
    pair_draw = 3,
    x_defect = 4,
    y_defect = 5,
    accel = 6,
};

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, Stream tag, std::uint64_t t,
                                  std::uint64_t i) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ (static_cast<std::uint64_t>(tag) * 0xd6e8feb86659fd93ull));
    h = mix64(h ^ t);
    h = mix64(h ^ i);
    return h;
}

/// Uniform double in [0, 1) from the counter stream.
inline double uniform01(std::uint64_t seed, Stream tag, std::uint64_t t, std::uint64_t i) {
    return static_cast<double>(counter_hash(seed, tag, t, i) >> 11) * 0x1.0p-53;
}

inline double exponential(std::uint64_t seed, Stream tag, std::uint64_t t, std::uint64_t i,
                          double mean) {
    double u = uniform01(seed, tag, t, i);
    return -mean * std::log1p(-u);
}

}  // namespace exclusim
