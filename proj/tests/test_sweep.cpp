// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dynwalk/dynwalk.hpp"

using namespace dynwalk;

namespace {

constexpr std::uint64_t kSeed = 0x53ee9;

// Grid cross-validation: every grid point must be classified by the sweep's
// intervals exactly as a direct path evaluation at that time classifies it.
void expect_grid_consistent(const WalkConfig& cfg, std::uint64_t n, const SweepResult& res,
                            const std::function<bool(const PathView&)>& pred) {
    const std::uint64_t grid = std::max<std::uint64_t>(10, 10 * res.event_count);
    for (std::uint64_t g = 0; g < grid; ++g) {
        const double t = (static_cast<double>(g) + 0.5) / static_cast<double>(grid);
        const bool direct = pred(path_view(cfg, n, t));
        EXPECT_EQ(direct, res.contains(t)) << "t=" << t;
    }
}

bool no_origin_return(const PathView& path) {
    for (std::size_t m = 1; m < path.positions.size(); ++m)
        if (path.positions[m] == kOrigin) return false;
    return true;
}

TEST(Sweep, ConstantTruePredicate) {
    const WalkConfig cfg{kSeed, 1.0, 100};
    const SweepResult res = sweep(cfg, 20, [](const PathView&) { return true; });
    ASSERT_EQ(res.intervals.size(), 1u);
    EXPECT_EQ(res.intervals[0].first, 0.0);
    EXPECT_EQ(res.intervals[0].second, 1.0);
    EXPECT_EQ(res.total_measure, 1.0);
}

TEST(Sweep, ZeroStepsHasNoEvents) {
    const WalkConfig cfg{kSeed, 1.0, 100};
    const SweepResult res = sweep(cfg, 0, [](const PathView& p) { return p.positions.size() == 1; });
    EXPECT_EQ(res.event_count, 0u);
    EXPECT_EQ(res.total_measure, 1.0);
}

TEST(Sweep, QuietWalkYieldsSingleInterval) {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const WalkConfig cfg{seed, 1.0, 2};
        if (!resample_events(cfg, 1, 0.0, 1.0).empty()) continue;
        const bool at0 = no_origin_return(path_view(cfg, 1, 0.0));
        const SweepResult res = sweep(cfg, 1, no_origin_return);
        EXPECT_EQ(res.event_count, 0u);
        if (at0) {
            ASSERT_EQ(res.intervals.size(), 1u);
            EXPECT_EQ(res.total_measure, 1.0);
        } else {
            EXPECT_TRUE(res.empty());
        }
        return;
    }
    FAIL() << "no quiet single-step walk in 300 seeds";
}

TEST(Sweep, Guards) {
    const WalkConfig cfg{kSeed, 1.0, kSweepStepCap + 10};
    EXPECT_THROW(sweep(cfg, kSweepStepCap + 1, [](const PathView&) { return true; }),
                 ResourceError);
    const WalkConfig short_cfg{kSeed, 0.5, 100};
    EXPECT_THROW(sweep(short_cfg, 5, [](const PathView&) { return true; }),
                 std::invalid_argument);
    EXPECT_THROW(sweep(WalkConfig{kSeed, 1.0, 3}, 5, [](const PathView&) { return true; }),
                 std::out_of_range);
}

TEST(Sweep, PredicateFailurePropagatesWithTime) {
    const WalkConfig cfg{kSeed, 1.0, 10};
    try {
        sweep(cfg, 10, [](const PathView& p) -> bool {
            if (p.t > 0.0) throw std::logic_error("boom");
            return true;
        });
        FAIL() << "expected propagation";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("t="), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
    }
}

TEST(Sweep, GridEquivalenceAndEndpointMembership) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const WalkConfig cfg{derive_stream(kSeed, stream_tag::trial, s), 1.0, 200};
        const std::uint64_t n = 60 + (s % 4) * 20;
        auto pred = (s % 2 == 0) ? std::function<bool(const PathView&)>(no_origin_return)
                                 : std::function<bool(const PathView&)>([](const PathView& p) {
                                       int visits = 0;
                                       for (std::size_t m = 1; m < p.positions.size(); ++m)
                                           if (on_unit_circle(p.positions[m])) ++visits;
                                       return visits >= 2;
                                   });
        const SweepResult res = sweep(cfg, n, pred);
        expect_grid_consistent(cfg, n, res, pred);

        std::vector<double> ring_times;
        for (const ResampleEvent& ev : resample_events(cfg, n, 0.0, 1.0))
            ring_times.push_back(ev.time);
        for (const auto& [a, b] : res.intervals) {
            const bool a_ok = a == 0.0 || a == 1.0 ||
                              std::binary_search(ring_times.begin(), ring_times.end(), a);
            const bool b_ok = b == 0.0 || b == 1.0 ||
                              std::binary_search(ring_times.begin(), ring_times.end(), b);
            EXPECT_TRUE(a_ok) << a;
            EXPECT_TRUE(b_ok) << b;
            EXPECT_LT(a, b);
        }
        // disjoint and sorted
        for (std::size_t i = 1; i < res.intervals.size(); ++i)
            EXPECT_LT(res.intervals[i - 1].second, res.intervals[i].first);
    }
}

TEST(Avoidance, NothingForbiddenMeansFullFractions) {
    AvoidanceSpec spec;
    spec.forbidden = [](Point) { return false; };
    spec.n_grid = {4, 8};
    spec.seeds = 120;
    spec.master_seed = kSeed;
    const AvoidanceReport rep = run_avoidance(spec);
    for (const auto& row : rep.rows) EXPECT_EQ(row.fraction, 1.0);
}

TEST(Avoidance, ForbiddenOriginMeansZero) {
    AvoidanceSpec spec;
    spec.forbidden = [](Point p) { return p.y % 2 == 0; };  // origin's row forbidden
    spec.n_grid = {4, 8};
    spec.seeds = 120;
    spec.master_seed = kSeed;
    const AvoidanceReport rep = run_avoidance(spec);
    for (const auto& row : rep.rows) EXPECT_EQ(row.fraction, 0.0);
}

// Odd rows forbidden: survival needs every step horizontal, decaying like 2^-n.
TEST(Avoidance, OddRowsDecay) {
    AvoidanceSpec spec;
    spec.forbidden = [](Point p) { return ((p.y % 2) + 2) % 2 == 1; };
    spec.n_grid = {6, 8, 10, 12, 14};
    spec.seeds = 400;
    spec.master_seed = kSeed;
    spec.workers = 2;
    spec.escape_witness = std::vector<Direction>{{1, 0}, {1, 0}, {-1, 0}, {-1, 0}};
    const AvoidanceReport rep = run_avoidance(spec);
    EXPECT_GT(rep.rows[0].fraction, rep.rows.back().fraction);
    ASSERT_GE(rep.fit.points, 3u);
    EXPECT_LT(rep.fit.slope, 0.0);
}

TEST(Avoidance, Guards) {
    AvoidanceSpec spec;
    spec.forbidden = [](Point p) { return p.y == 1; };
    spec.n_grid = {4};
    spec.seeds = 50;  // below the floor
    EXPECT_THROW(run_avoidance(spec), std::invalid_argument);
    spec.seeds = 100;
    spec.escape_witness = std::vector<Direction>{{0, 1}};  // walks into the set
    EXPECT_THROW(run_avoidance(spec), std::invalid_argument);
}

TEST(ExceptionalDemo, VacuousAndImpossibleBounds) {
    const WalkConfig cfg{kSeed, 1.0, 100};
    const SweepResult vacuous = exceptional_demo(cfg, 30, 30, 0);
    EXPECT_EQ(vacuous.total_measure, 1.0);
    const SweepResult impossible = exceptional_demo(cfg, 30, 10, 31);
    EXPECT_TRUE(impossible.empty());
}

// Structural check at simulation scale: endpoints live on ring times.
TEST(ExceptionalDemo, EndpointStructureAtScale) {
    const std::uint64_t n = 10'000;
    double measure_sum = 0.0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const WalkConfig cfg{derive_stream(kSeed, stream_tag::trial, s), 1.0, n};
        const SweepResult res = exceptional_demo(cfg, n, 100, 3);
        std::vector<double> ring_times;
        for (const ResampleEvent& ev : resample_events(cfg, n, 0.0, 1.0))
            ring_times.push_back(ev.time);
        for (const auto& [a, b] : res.intervals) {
            EXPECT_TRUE(a == 0.0 || std::binary_search(ring_times.begin(), ring_times.end(), a));
            EXPECT_TRUE(b == 1.0 || std::binary_search(ring_times.begin(), ring_times.end(), b));
        }
        measure_sum += res.total_measure;
        EXPECT_EQ(res.event_count, ring_times.size());
    }
    EXPECT_GE(measure_sum, 0.0);
}

TEST(NestedIntersection, EmptyIntersectionIsFullInterval) {
    const WalkConfig cfg{kSeed, 1.0, 100};
    const ParamSchedule sched = demo_schedule("small");
    const SweepResult res = nested_intersection(cfg, sched, 0);
    EXPECT_EQ(res.total_measure, 1.0);
}

// T_{M+1} is contained in T_M, interval by interval.
TEST(NestedIntersection, NestedInM) {
    const ParamSchedule sched = demo_schedule("small");
    auto covered_by = [](const std::pair<double, double>& iv, const SweepResult& outer) {
        for (const auto& [c, d] : outer.intervals)
            if (c <= iv.first && iv.second <= d) return true;
        return false;
    };
    int nonempty_t2 = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        const WalkConfig cfg{derive_stream(kSeed, stream_tag::trial, s), 1.0, 30};
        const SweepResult t1 = nested_intersection(cfg, sched, 1);
        const SweepResult t2 = nested_intersection(cfg, sched, 2);
        EXPECT_LE(t2.total_measure, t1.total_measure + 1e-15);
        for (const auto& iv : t2.intervals) {
            EXPECT_TRUE(covered_by(iv, t1)) << "seed " << s;
        }
        if (!t2.empty()) ++nonempty_t2;
    }
    EXPECT_GT(nonempty_t2, 0);
}

TEST(NestedIntersection, ChainVerifiesNesting) {
    const ParamSchedule sched = demo_schedule("small");
    for (std::uint64_t s = 0; s < 20; ++s) {
        const WalkConfig cfg{derive_stream(kSeed ^ 0xc4a1, stream_tag::trial, s), 1.0, 30};
        const auto chain = nested_chain(cfg, sched, 2);
        ASSERT_EQ(chain.size(), 2u);
        EXPECT_LE(chain[1].total_measure, chain[0].total_measure + 1e-15);
    }
}

}  // namespace
