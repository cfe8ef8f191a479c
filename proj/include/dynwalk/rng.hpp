// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Counter-style splittable randomness: every step index, trial index and
// helper draw gets its own SplitMix64 stream keyed by (seed, tag, label),
// so simulations are reproducible without storing any generator state.
#pragma once

#include <cmath>
#include <cstdint>

#include "dynwalk/lattice.hpp"

namespace dynwalk {

/// SplitMix64 finalizer (Steele/Lea/Flood mixing constants).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Key for an independent substream of `seed` labelled by `label`.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t label) {
    return mix64(seed ^ mix64(label));
}
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_stream(derive_stream(seed, a), b);
}

namespace stream_tag {
inline constexpr std::uint64_t step = 0x737465702d726e67ull;
inline constexpr std::uint64_t trial = 0x747269616c2d3030ull;
inline constexpr std::uint64_t start = 0x73746172742d3030ull;
inline constexpr std::uint64_t base_path = 0x706174682d626173ull;
inline constexpr std::uint64_t subset = 0x7375627365742d30ull;
}  // namespace stream_tag

class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in the open interval (0, 1).
    double unit_open() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Exponential(1) waiting time; strictly positive.
    double exp1() { return -std::log(unit_open()); }

    /// Uniform over the four unit steps.
    Direction direction() { return kDirections[next() >> 62]; }

    /// Uniform integer in [0, bound), bound > 0, via fixed-point multiply.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
};

}  // namespace dynwalk
