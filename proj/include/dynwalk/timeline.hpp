// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dynwalk/lattice.hpp"
#include "dynwalk/rng.hpp"

namespace dynwalk {

/// One ring of a step's clock: the time and the freshly drawn direction.
struct TimedValue {
    double time = 0.0;
    Direction value{};
};

/// A single step index's direction as a function of time: the value drawn at
/// time zero plus every clock ring in (0, horizon], in increasing time order.
struct StepTimeline {
    std::uint64_t index = 1;
    Direction initial{};
    std::vector<TimedValue> events;
    double horizon = 0.0;

    /// Direction in force at time t: the last ring at or before t, else `initial`.
    Direction value_at(double t) const {
        if (!(t >= 0.0 && t <= horizon))
            throw std::invalid_argument("StepTimeline::value_at: t outside [0, horizon]");
        auto it = std::upper_bound(events.begin(), events.end(), t,
                                   [](double q, const TimedValue& e) { return q < e.time; });
        return it == events.begin() ? initial : std::prev(it)->value;
    }
};

/// Realize the timeline of step `index` under `master_seed`: rings arrive as a
/// rate-one Poisson process cut at `horizon`, and every value (the initial one
/// included) is a fresh uniform direction. Deterministic in
/// (master_seed, index, horizon); distinct indices use independent streams.
inline StepTimeline make_timeline(std::uint64_t master_seed, std::uint64_t index, double horizon) {
    if (index == 0) throw std::invalid_argument("make_timeline: index must be positive");
    if (!(horizon >= 0.0)) throw std::invalid_argument("make_timeline: horizon must be >= 0");
    SplitMix64 rng(derive_stream(master_seed, stream_tag::step, index));
    StepTimeline tl;
    tl.index = index;
    tl.horizon = horizon;
    tl.initial = rng.direction();
    for (double t = rng.exp1(); t <= horizon; t += rng.exp1()) tl.events.push_back({t, rng.direction()});
    return tl;
}

}  // namespace dynwalk
