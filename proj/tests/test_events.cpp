// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <vector>

#include "dynwalk/enumerate.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/rng.hpp"
#include "dynwalk/schedule.hpp"

using namespace dynwalk;

namespace {

PathView make_path(std::vector<Point> positions) {
    PathView path;
    path.t = 0.0;
    path.positions = std::move(positions);
    return path;
}

// demo "small": s = [1,2,5,8,10,...], segment 2 covers steps {2,3,4}.
class SegmentDetect : public ::testing::Test {
  protected:
    ParamSchedule sched = demo_schedule("small");
};

TEST_F(SegmentDetect, CleanHitThroughUnitCircle) {
    const PathView path = make_path(
        {{0, 0}, {0, 1}, {1, 1}, {1, 0}, {2, 0}, {2, 1}});
    const SegmentOutcome out = detect_segment(path, 2, sched);
    EXPECT_TRUE(out.hit_disc);
    EXPECT_FALSE(out.hit_origin);
    EXPECT_TRUE(out.clean_hit());
    EXPECT_TRUE(out.end_in_annulus);
}

TEST_F(SegmentDetect, FarPathNeverHits) {
    const PathView path = make_path(
        {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {2, 0}, {2, 1}});
    const SegmentOutcome out = detect_segment(path, 2, sched);
    EXPECT_FALSE(out.hit_disc);
    EXPECT_FALSE(out.hit());
    EXPECT_FALSE(out.clean_hit());
}

TEST_F(SegmentDetect, OriginVisitSpoilsCleanHit) {
    const PathView path = make_path(
        {{0, 0}, {1, 0}, {0, 0}, {1, 0}, {1, 1}, {1, 2}});
    // S_2 = origin and S_3 on the circle, both inside segment 2.
    const SegmentOutcome out = detect_segment(path, 2, sched);
    EXPECT_TRUE(out.hit_disc);
    EXPECT_TRUE(out.hit_origin);
    EXPECT_FALSE(out.clean_hit());
}

TEST_F(SegmentDetect, ShortPathRejected) {
    const PathView path = make_path({{0, 0}, {1, 0}, {1, 1}});
    EXPECT_THROW(detect_segment(path, 2, sched), std::invalid_argument);
}

// The detector route over all 4^6 continuations must count exactly what the
// direct enumeration counts (segment of length 6, start (2,0)).
TEST(SegmentExhaustive, MatchesDirectEnumeration) {
    const ParamSchedule sched = ParamSchedule::desk(
        {BigInt(1), BigInt(2), BigInt(8), BigInt(14)},
        {BigInt(1), BigInt(1), BigInt(1)}, {BigInt(4), BigInt(8), BigInt(14)});
    const Point start{2, 0};
    // Route A: feed each continuation through the segment detector.
    const ExactEventProb via_detector = brute_force(6, start, [&](const std::vector<Point>& path) {
        return segment_outcome(path, 2, 2, sched).hit_disc;
    });
    // Route B: direct window scan, no detector machinery.
    const ExactEventProb direct = brute_force(6, start, [](const std::vector<Point>& path) {
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
            if (on_unit_circle(path[i])) return true;
        return false;
    });
    EXPECT_EQ(via_detector.hits, direct.hits);
    EXPECT_EQ(via_detector.total, 4096u);
    // Clean-hit variant as well.
    const ExactEventProb clean_det = brute_force(6, start, [&](const std::vector<Point>& path) {
        return segment_outcome(path, 2, 2, sched).clean_hit();
    });
    const ExactEventProb clean_direct = brute_force(6, start, [](const std::vector<Point>& path) {
        bool disc = false, origin = false;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            disc = disc || on_unit_circle(path[i]);
            origin = origin || path[i] == kOrigin;
        }
        return disc && !origin;
    });
    EXPECT_EQ(clean_det.hits, clean_direct.hits);
    EXPECT_LE(clean_det.hits, via_detector.hits);  // clean hits are hits
}

class SuperDetect : public ::testing::Test {
  protected:
    ParamSchedule sched = demo_schedule("small");
};

TEST_F(SuperDetect, NoHitsMeansNoWitness) {
    std::vector<Point> pos;
    for (int m = 0; m <= 10; ++m) pos.push_back({m, 0});
    const SuperSegmentOutcome out = detect_super(make_path(pos), 1, sched);
    EXPECT_TRUE(out.all_ends_in_annuli);
    EXPECT_FALSE(out.holds);
    EXPECT_FALSE(out.witness.has_value());
}

TEST_F(SuperDetect, TwoCleanHitsRejected) {
    const PathView path = make_path({{0, 0},
                                     {1, 0},
                                     {1, 1},
                                     {0, 1},
                                     {1, 1},
                                     {1, 0},
                                     {2, 0},
                                     {2, 1},
                                     {2, 2},
                                     {2, 1},
                                     {2, 0}});
    const SuperSegmentOutcome out = detect_super(path, 1, sched);
    EXPECT_TRUE(out.segments[0].clean_hit());
    EXPECT_TRUE(out.segments[1].clean_hit());
    EXPECT_FALSE(out.holds);
}

TEST_F(SuperDetect, SingleCleanHitHolds) {
    const PathView path = make_path({{0, 0},
                                     {1, 0},
                                     {1, 1},
                                     {0, 1},
                                     {1, 1},
                                     {1, 2},
                                     {2, 2},
                                     {2, 3},
                                     {2, 4},
                                     {2, 3},
                                     {2, 2}});
    const SuperSegmentOutcome out = detect_super(path, 1, sched);
    EXPECT_TRUE(out.holds);
    ASSERT_TRUE(out.witness.has_value());
    EXPECT_EQ(*out.witness, 2u);
}

TEST_F(SuperDetect, GRangeFlagControlsTrailingAnnulus) {
    const PathView path = make_path({{0, 0},
                                     {1, 0},
                                     {1, 1},
                                     {0, 1},
                                     {1, 1},
                                     {1, 2},
                                     {1, 1},
                                     {1, 2},
                                     {1, 1},
                                     {1, 0},
                                     {0, 0}});
    // S_10 is the origin: the annulus test one segment past the block fails,
    // the block-only range still holds.
    const SuperSegmentOutcome incl = detect_super(path, 1, sched, GRange::through_next);
    const SuperSegmentOutcome excl = detect_super(path, 1, sched, GRange::within);
    EXPECT_FALSE(incl.holds);
    EXPECT_TRUE(excl.holds);
    EXPECT_EQ(super_required_steps(sched, 1, GRange::through_next), 10u);
    EXPECT_EQ(super_required_steps(sched, 1, GRange::within), 8u);
}

// Over random walks: clean hits imply hits, and a holding super-segment
// reports exactly one witness whose segment is the unique hit.
TEST(EventProperties, InclusionAndUniqueWitness) {
    const ParamSchedule sched = demo_schedule("small");
    int holds_seen = 0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        const WalkConfig cfg{seed, 1.0, 10};
        const PathView path = path_view(cfg, 10, 0.0);
        const SuperSegmentOutcome out = detect_super(path, 1, sched);
        int hits = 0;
        for (const SegmentOutcome& seg : out.segments) {
            EXPECT_TRUE(!seg.clean_hit() || seg.hit());
            hits += seg.hit() ? 1 : 0;
        }
        if (out.holds) {
            ++holds_seen;
            ASSERT_TRUE(out.witness.has_value());
            EXPECT_EQ(hits, 1);
            int witnesses = 0;
            for (const SegmentOutcome& seg : out.segments)
                if (seg.clean_hit()) ++witnesses;
            EXPECT_EQ(witnesses, 1);
        }
    }
    EXPECT_GT(holds_seen, 0);  // the event is not degenerate at this scale
}

// Altering a step strictly after s_j cannot change the segment-j outcome.
TEST(EventProperties, LocalityPastSegmentEnd) {
    const ParamSchedule sched = demo_schedule("small");
    SplitMix64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Direction> dirs(10);
        for (auto& d : dirs) d = rng.direction();
        auto positions = [&]() {
            std::vector<Point> pos{kOrigin};
            for (const Direction& d : dirs) pos.push_back(pos.back() + d);
            return pos;
        };
        const SegmentOutcome before = segment_outcome(positions(), 0, 2, sched);
        const std::uint64_t alter = 6 + rng.below(5);  // step in (s_2, 10]
        dirs[alter - 1] = rng.direction();
        const SegmentOutcome after = segment_outcome(positions(), 0, 2, sched);
        EXPECT_EQ(before.hit_disc, after.hit_disc);
        EXPECT_EQ(before.hit_origin, after.hit_origin);
        EXPECT_EQ(before.end_in_annulus, after.end_in_annulus);
    }
}

TEST(JointDetect, TimeZeroCollapses) {
    const ParamSchedule sched = demo_schedule("small");
    const WalkConfig cfg{0x10c0ffee, 1.0, 10};
    const JointSegmentOutcome seg = detect_segment_joint(cfg, 2, sched, 0.0);
    EXPECT_EQ(seg.at0.hit_disc, seg.att.hit_disc);
    EXPECT_EQ(seg.hit_both, seg.at0.hit());
    EXPECT_EQ(seg.clean_hit_both, seg.at0.clean_hit());
    const JointSuperOutcome sup = detect_super_joint(cfg, 1, sched, 0.0);
    EXPECT_EQ(sup.holds_both, sup.at0.holds);
    EXPECT_EQ(sup.at0.holds, sup.att.holds);
}

TEST(JointDetect, QuietWindowKeepsOutcomesEqual) {
    const ParamSchedule sched = demo_schedule("small");
    const double t = 0.05;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const WalkConfig cfg{seed, 1.0, 10};
        if (!resample_events(cfg, 10, 0.0, t).empty()) continue;
        const JointSuperOutcome sup = detect_super_joint(cfg, 1, sched, t);
        EXPECT_EQ(sup.at0.holds, sup.att.holds);
        EXPECT_EQ(sup.holds_both, sup.at0.holds);
        const JointSegmentOutcome seg = detect_segment_joint(cfg, 3, sched, t);
        EXPECT_EQ(seg.at0.hit_disc, seg.att.hit_disc);
        EXPECT_EQ(seg.at0.hit_origin, seg.att.hit_origin);
        return;
    }
    FAIL() << "no quiet prefix found in 300 seeds";
}

}  // namespace
