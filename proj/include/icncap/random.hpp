#pragma once

#include <cstdint>
#include <random>

namespace icncap {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to decorrelate (seed, stream) pairs.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the independent stream `stream` under the master `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(seed, stream));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01(rng) < p;
}

}  // namespace icncap
