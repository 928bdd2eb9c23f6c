#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace reline {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to fan a master seed out into stream seeds so
// that (master_seed, purpose, index) always maps to the same child seed.
inline uint64_t mix_seed(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t master, std::string_view purpose, uint64_t index = 0) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : purpose) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix_seed(master ^ mix_seed(h) ^ (index * 0x9e3779b97f4a7c15ULL));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi_inclusive) {
    return std::uniform_int_distribution<int>(lo, hi_inclusive)(rng);
}

inline double gaussian(Rng& rng, double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(rng);
}

}  // namespace reline
