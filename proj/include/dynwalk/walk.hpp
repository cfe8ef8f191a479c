// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynwalk/lattice.hpp"
#include "dynwalk/timeline.hpp"

namespace dynwalk {

/// A reproducible family of step timelines. Timelines are derived lazily from
/// (master_seed, index), never stored, so n_max can be large.
struct WalkConfig {
    std::uint64_t master_seed = 0;
    double horizon = 1.0;
    std::uint64_t n_max = 1'000'000;

    StepTimeline timeline(std::uint64_t index) const {
        if (index == 0 || index > n_max)
            throw std::out_of_range("WalkConfig::timeline: index outside [1, n_max]");
        return make_timeline(master_seed, index, horizon);
    }
};

/// Snapshot of the walk at one dynamical time: positions S_0..S_n.
struct PathView {
    double t = 0.0;
    std::vector<Point> positions;  // positions[m] = S_m(t); positions[0] = origin

    std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
};

namespace detail {
inline void check_query(const WalkConfig& cfg, std::uint64_t n, double t) {
    if (n > cfg.n_max) throw std::out_of_range("walk query: n exceeds n_max");
    if (!(t >= 0.0 && t <= cfg.horizon))
        throw std::invalid_argument("walk query: t outside [0, horizon]");
}
}  // namespace detail

/// S_n(t): the sum of the first n step directions in force at time t.
inline Point position(const WalkConfig& cfg, std::uint64_t n, double t) {
    detail::check_query(cfg, n, t);
    Point p = kOrigin;
    for (std::uint64_t i = 1; i <= n; ++i) p += cfg.timeline(i).value_at(t);
    return p;
}

/// All of S_0..S_n at time t in one pass.
inline PathView path_view(const WalkConfig& cfg, std::uint64_t n, double t) {
    detail::check_query(cfg, n, t);
    PathView view;
    view.t = t;
    view.positions.reserve(n + 1);
    Point p = kOrigin;
    view.positions.push_back(p);
    for (std::uint64_t i = 1; i <= n; ++i) {
        p += cfg.timeline(i).value_at(t);
        view.positions.push_back(p);
    }
    return view;
}

/// One clock ring seen across the merged walk.
struct ResampleEvent {
    double time = 0.0;
    std::uint64_t step_index = 0;
    Direction old_value{};
    Direction new_value{};
};

/// Merged rings of the given timelines restricted to (a, b], sorted by time
/// with ties broken by ascending step index.
inline std::vector<ResampleEvent> merge_events(std::span<const StepTimeline> timelines, double a,
                                               double b) {
    std::vector<ResampleEvent> out;
    for (const StepTimeline& tl : timelines) {
        Direction prev = tl.initial;
        for (const TimedValue& ev : tl.events) {
            if (ev.time > b) break;
            if (ev.time > a) out.push_back({ev.time, tl.index, prev, ev.value});
            prev = ev.value;
        }
    }
    std::sort(out.begin(), out.end(), [](const ResampleEvent& l, const ResampleEvent& r) {
        return l.time != r.time ? l.time < r.time : l.step_index < r.step_index;
    });
    return out;
}

/// Merged rings of steps 1..n inside (a, b].
inline std::vector<ResampleEvent> resample_events(const WalkConfig& cfg, std::uint64_t n, double a,
                                                  double b) {
    if (n == 0 || n > cfg.n_max) throw std::out_of_range("resample_events: n outside [1, n_max]");
    if (!(a >= 0.0 && a <= b && b <= cfg.horizon))
        throw std::invalid_argument("resample_events: need 0 <= a <= b <= horizon");
    std::vector<StepTimeline> tls;
    tls.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) tls.push_back(cfg.timeline(i));
    return merge_events(tls, a, b);
}

}  // namespace dynwalk
