// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Event-driven time sweep over [0, 1]. The first n steps of the walk are
// piecewise constant in t between consecutive clock rings, so a path
// predicate can be evaluated once per constancy interval; the sweep returns
// the maximal merged intervals where it holds. Interval endpoints are always
// ring times, 0 or 1.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "dynwalk/errors.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/stats.hpp"
#include "dynwalk/walk.hpp"

namespace dynwalk {

inline constexpr std::uint64_t kSweepStepCap = 100'000;

struct SweepResult {
    std::uint64_t seed = 0;
    std::uint64_t n = 0;
    std::vector<std::pair<double, double>> intervals;  // disjoint, sorted, half-open
    double total_measure = 0.0;
    std::uint64_t event_count = 0;

    bool empty() const { return intervals.empty(); }
    bool contains(double t) const {
        for (const auto& [a, b] : intervals)
            if (a <= t && t < b) return true;
        return false;
    }
};

/// Evaluates `predicate` over the walk's first n steps across t in [0, 1],
/// once per constancy interval, and reports the maximal intervals where it
/// holds. Truth on [a, b) is sampled at a, which is exact by piecewise
/// constancy. Predicates must be pure; failures are rethrown with the
/// offending t.
inline SweepResult sweep(const WalkConfig& cfg, std::uint64_t n,
                         const std::function<bool(const PathView&)>& predicate) {
    if (n > cfg.n_max) throw std::out_of_range("sweep: n exceeds n_max");
    if (n > kSweepStepCap) throw ResourceError("sweep: n exceeds the per-sweep step cap");
    if (cfg.horizon < 1.0) throw std::invalid_argument("sweep: horizon must cover [0, 1]");

    std::vector<StepTimeline> tls;
    tls.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) tls.push_back(cfg.timeline(i));
    const std::vector<ResampleEvent> events = merge_events(tls, 0.0, 1.0);

    SweepResult res;
    res.seed = cfg.master_seed;
    res.n = n;
    res.event_count = events.size();

    PathView path;
    path.t = 0.0;
    path.positions.resize(n + 1, kOrigin);
    for (std::uint64_t i = 1; i <= n; ++i)
        path.positions[i] = path.positions[i - 1] + tls[i - 1].initial;

    auto eval = [&](double at) {
        path.t = at;
        try {
            return predicate(path);
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep: predicate failed at t=" + std::to_string(at) + ": " +
                                     e.what());
        }
    };
    auto record = [&](double a, double b, bool value) {
        if (!value || !(a < b)) return;
        if (!res.intervals.empty() && res.intervals.back().second == a)
            res.intervals.back().second = b;
        else
            res.intervals.emplace_back(a, b);
    };

    double left = 0.0;
    bool current = eval(0.0);
    std::size_t i = 0;
    while (i < events.size()) {
        const double te = events[i].time;
        if (te >= 1.0) break;
        record(left, te, current);
        // Apply every ring at this instant, then re-evaluate once.
        while (i < events.size() && events[i].time == te) {
            const ResampleEvent& ev = events[i];
            const Direction delta{ev.new_value.dx - ev.old_value.dx,
                                  ev.new_value.dy - ev.old_value.dy};
            for (std::uint64_t m = ev.step_index; m <= n; ++m) {
                path.positions[m].x += delta.dx;
                path.positions[m].y += delta.dy;
            }
            ++i;
        }
        left = te;
        current = eval(te);
    }
    record(left, 1.0, current);
    for (const auto& [a, b] : res.intervals) res.total_measure += b - a;
    return res;
}

/// Forbidden-set experiment: for each seed and each n in the grid, the sweep
/// looks for times at which S_0..S_n all avoid L; reported is the fraction of
/// seeds where such a time exists, with a log-linear fit of the decay over
/// the strictly positive fractions.
struct AvoidanceSpec {
    std::function<bool(Point)> forbidden;
    std::vector<std::uint64_t> n_grid;
    std::uint64_t seeds = 100;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
    std::optional<std::vector<Direction>> escape_witness;
};

struct AvoidanceReport {
    struct Row {
        std::uint64_t n = 0;
        std::uint64_t nonempty = 0;
        double fraction = 0.0;
    };
    std::vector<Row> rows;
    std::uint64_t seeds = 0;
    LinearFit fit;  // ln(fraction) against n, over rows with fraction > 0
};

inline bool avoids_forbidden(const PathView& path, const std::function<bool(Point)>& forbidden,
                             std::uint64_t n) {
    for (std::uint64_t m = 0; m <= n; ++m)
        if (forbidden(path.positions[m])) return false;
    return true;
}

inline AvoidanceReport run_avoidance(const AvoidanceSpec& spec) {
    if (!spec.forbidden) throw std::invalid_argument("run_avoidance: missing forbidden-set predicate");
    if (spec.seeds < 100) throw std::invalid_argument("run_avoidance: need at least 100 seeds");
    if (spec.n_grid.empty()) throw std::invalid_argument("run_avoidance: empty n grid");
    if (spec.escape_witness) {
        Point p = kOrigin;
        if (spec.forbidden(p))
            throw std::invalid_argument("run_avoidance: witness starts inside the forbidden set");
        for (Direction d : *spec.escape_witness) {
            p += d;
            if (spec.forbidden(p))
                throw std::invalid_argument("run_avoidance: witness path enters the forbidden set");
        }
    }

    const std::uint64_t n_max = *std::max_element(spec.n_grid.begin(), spec.n_grid.end());
    const unsigned workers = std::max(1u, spec.workers);
    std::vector<std::vector<std::uint64_t>> partial(workers,
                                                    std::vector<std::uint64_t>(spec.n_grid.size(), 0));
    auto body = [&](unsigned w) {
        for (std::uint64_t s = w; s < spec.seeds; s += workers) {
            WalkConfig cfg{derive_stream(spec.master_seed, stream_tag::trial, s), 1.0, n_max};
            for (std::size_t gi = 0; gi < spec.n_grid.size(); ++gi) {
                const std::uint64_t n = spec.n_grid[gi];
                const SweepResult r = sweep(cfg, n, [&](const PathView& path) {
                    return avoids_forbidden(path, spec.forbidden, n);
                });
                if (!r.empty()) ++partial[w][gi];
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }

    AvoidanceReport rep;
    rep.seeds = spec.seeds;
    std::vector<double> xs, ys;
    for (std::size_t gi = 0; gi < spec.n_grid.size(); ++gi) {
        std::uint64_t nonempty = 0;
        for (unsigned w = 0; w < workers; ++w) nonempty += partial[w][gi];
        const double frac = static_cast<double>(nonempty) / static_cast<double>(spec.seeds);
        rep.rows.push_back({spec.n_grid[gi], nonempty, frac});
        if (frac > 0.0) {
            xs.push_back(static_cast<double>(spec.n_grid[gi]));
            ys.push_back(std::log(frac));
        }
    }
    rep.fit = fit_line(xs, ys);
    return rep;
}

/// Finite-scale search for special times: S_m(t) must avoid the origin for
/// all m0 < m <= n while the unit circle collects at least h visits among
/// m <= n.
inline SweepResult exceptional_demo(const WalkConfig& cfg, std::uint64_t n, std::uint64_t m0,
                                    std::uint64_t h) {
    return sweep(cfg, n, [&, m0, h, n](const PathView& path) {
        std::uint64_t circle_visits = 0;
        for (std::uint64_t m = 1; m <= n; ++m) {
            const Point p = path.positions[m];
            if (m > m0 && p == kOrigin) return false;
            if (on_unit_circle(p)) ++circle_visits;
        }
        return circle_visits >= h;
    });
}

/// T_M analog: times at which every super-segment event k = 1..m_levels holds.
inline SweepResult nested_intersection(const WalkConfig& cfg, const ParamSchedule& sched,
                                       std::uint32_t m_levels,
                                       GRange grange = GRange::through_next) {
    if (m_levels == 0) return sweep(cfg, 0, [](const PathView&) { return true; });
    const std::uint64_t n = super_required_steps(sched, m_levels, grange);
    return sweep(cfg, n, [&, m_levels](const PathView& path) {
        for (std::uint32_t k = 1; k <= m_levels; ++k)
            if (!detect_super(path, k, sched, grange).holds) return false;
        return true;
    });
}

/// T_1..T_M on one seed, verifying the nesting T_{M+1} subset-of T_M as it goes.
inline std::vector<SweepResult> nested_chain(const WalkConfig& cfg, const ParamSchedule& sched,
                                             std::uint32_t m_levels,
                                             GRange grange = GRange::through_next) {
    std::vector<SweepResult> chain;
    for (std::uint32_t m = 1; m <= m_levels; ++m) {
        chain.push_back(nested_intersection(cfg, sched, m, grange));
        if (m > 1) {
            const SweepResult& outer = chain[m - 2];
            for (const auto& [a, b] : chain.back().intervals) {
                bool covered = false;
                for (const auto& [c, d] : outer.intervals)
                    if (c <= a && b <= d) {
                        covered = true;
                        break;
                    }
                if (!covered)
                    throw std::logic_error("nested_chain: intersection not nested across levels");
            }
        }
    }
    return chain;
}

}  // namespace dynwalk
