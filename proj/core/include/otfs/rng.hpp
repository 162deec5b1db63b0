#pragma once

#include "otfs/types.hpp"

#include <cstdint>
#include <random>

namespace otfs {

/// splitmix64 finalizer; mixes counters into seeds so that per-trial
/// streams are independent of worker scheduling.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t point, std::uint64_t trial) {
    return mix64(mix64(base ^ mix64(point)) ^ trial);
}

inline std::mt19937_64 make_rng(std::uint64_t base, std::uint64_t point = 0, std::uint64_t trial = 0) {
    return std::mt19937_64(derive_seed(base, point, trial));
}

/// One CSCG sample with variance `var` (i.e. Re and Im each N(0, var/2)).
inline cd cscg(std::mt19937_64& rng, double var = 1.0) {
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    return {n(rng), n(rng)};
}

inline CVec cscg_vector(std::mt19937_64& rng, int len, double var = 1.0) {
    CVec v(len);
    std::normal_distribution<double> n(0.0, std::sqrt(var / 2.0));
    for (int i = 0; i < len; ++i) v(i) = cd(n(rng), n(rng));
    return v;
}

}  // namespace otfs
