// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "dynwalk/rng.hpp"
#include "dynwalk/schedule.hpp"

using namespace dynwalk;
namespace mp = boost::multiprecision;

namespace {

std::vector<BigInt> big(std::initializer_list<long long> xs) {
    std::vector<BigInt> v;
    for (long long x : xs) v.emplace_back(x);
    return v;
}

TEST(PaperSchedule, SmallBoundaryValues) {
    const ParamSchedule sched = ParamSchedule::paper(2);
    EXPECT_EQ(sched.boundary(0), BigInt(1));
    EXPECT_EQ(sched.boundary(1), BigInt(4));
    EXPECT_EQ(sched.boundary(2), BigInt(262144));
    EXPECT_EQ(sched.inner_radius(1), BigInt(2));
    EXPECT_EQ(sched.outer_radius(1), BigInt(4));
    EXPECT_EQ(sched.inner_radius(2), BigInt(16));
    EXPECT_EQ(sched.outer_radius(2), BigInt(262144));
}

// s_5 = 5^10 * 2^50 needs more than 64 bits; recompute it independently.
TEST(PaperSchedule, ExactBigValues) {
    const ParamSchedule sched = ParamSchedule::paper(5);
    BigInt expected = 1;
    for (int i = 0; i < 10; ++i) expected *= 5;
    for (int i = 0; i < 50; ++i) expected *= 2;
    EXPECT_EQ(sched.boundary(5), expected);
    EXPECT_GT(sched.boundary(5), BigInt(std::numeric_limits<std::uint64_t>::max()));
    EXPECT_EQ(sched.boundary(5).str(), "10995116277760000000000");
    EXPECT_THROW(sched.boundary_u64(5), ResourceError);
}

TEST(PaperSchedule, RequiresPositiveKmax) {
    EXPECT_THROW(ParamSchedule::paper(0), std::invalid_argument);
}

TEST(DeskSchedule, AcceptsValidSpec) {
    const ParamSchedule sched =
        ParamSchedule::desk(big({1, 4, 64, 1024}), big({2, 8, 32}), big({4, 64, 1024}));
    EXPECT_EQ(sched.k_max(), 3u);
    EXPECT_EQ(sched.boundary(3), BigInt(1024));
    EXPECT_EQ(sched.inner_radius(2), BigInt(8));
}

TEST(DeskSchedule, RejectsInvalidSpecs) {
    EXPECT_THROW(ParamSchedule::desk(big({1, 4, 4}), big({1, 1}), big({4, 4})),
                 std::invalid_argument);  // non-increasing boundaries
    EXPECT_THROW(ParamSchedule::desk(big({1, 4}), big({5}), big({4})),
                 std::invalid_argument);  // inner > outer
    EXPECT_THROW(ParamSchedule::desk(big({1, 4}), big({0}), big({4})),
                 std::invalid_argument);  // inner < 1
    EXPECT_THROW(ParamSchedule::desk(big({0, 4}), big({1}), big({4})),
                 std::invalid_argument);  // s_0 < 1
    EXPECT_THROW(ParamSchedule::desk(big({1, 4}), big({1, 1}), big({4})),
                 std::invalid_argument);  // radii length mismatch
}

TEST(DeskSchedule, DefaultRadiiRuleUsesBoundaries) {
    const ParamSchedule sched = ParamSchedule::desk(big({1, 4, 64}), big({2, 8}));
    EXPECT_EQ(sched.outer_radius(1), sched.boundary(1));
    EXPECT_EQ(sched.outer_radius(2), sched.boundary(2));
    EXPECT_EQ(sched.inner_radius(2), BigInt(8));
}

TEST(DeskSchedule, MatchesPaperWithExplicitValues) {
    const ParamSchedule paper = ParamSchedule::paper(2);
    const ParamSchedule desk =
        ParamSchedule::desk(big({1, 4, 262144}), big({2, 16}), big({4, 262144}));
    EXPECT_TRUE(paper == desk);
}

TEST(SegmentOf, HalfOpenBoundaries) {
    const ParamSchedule sched = ParamSchedule::paper(3);
    EXPECT_EQ(sched.segment_of(4), 2u);  // s_1 = 4 <= 4 < s_2
    EXPECT_EQ(sched.segment_of(1), 1u);
    EXPECT_EQ(sched.segment_of(3), 1u);
    for (std::uint32_t j = 1; j < 3; ++j) {
        EXPECT_EQ(sched.segment_of(sched.boundary(j) - 1), j);
        EXPECT_EQ(sched.segment_of(sched.boundary(j)), j + 1);
    }
    EXPECT_THROW(sched.segment_of(0), std::out_of_range);
    EXPECT_THROW(sched.segment_of(sched.boundary(3)), std::out_of_range);
}

// segment_of inverts the segment interval map over random steps.
TEST(SegmentOf, PartitionProperty) {
    const ParamSchedule sched =
        ParamSchedule::desk(big({1, 7, 19, 55, 101}), big({1, 2, 3, 4}), big({7, 19, 55, 101}));
    SplitMix64 rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t step = 1 + rng.below(100);
        const std::uint32_t j = sched.segment_of(step);
        auto [lo, hi] = sched.segment_range(j);
        EXPECT_LE(lo, BigInt(step));
        EXPECT_LT(BigInt(step), hi);
    }
}

TEST(Beta, FrozenValues) {
    EXPECT_EQ(beta(1), BigRat(0));
    // Direct product route: (1/2)(3/5)(2/3)(5/7) over j = 4..7.
    const BigRat direct = BigRat(2, 4) * BigRat(3, 5) * BigRat(4, 6) * BigRat(5, 7);
    EXPECT_EQ(beta(2), direct);
    EXPECT_EQ(beta(2), BigRat(1, 7));
    EXPECT_EQ(beta(3), BigRat(1, 5));
    EXPECT_THROW(beta(0), std::invalid_argument);
}

// The enumerated product telescopes to a closed form; check both routes.
TEST(Beta, ClosedFormUpTo20) {
    for (std::uint32_t k = 1; k <= 20; ++k) {
        const BigInt a = BigInt(1) << k;
        const BigInt b = BigInt(1) << (k + 1);
        const BigRat closed((a - 1) * (a - 2), (b - 1) * (b - 2));
        EXPECT_EQ(beta(k), closed) << "k=" << k;
    }
}

TEST(Beta, BoundedMonotoneAndNearQuarter) {
    BigRat prev = beta(2);
    for (std::uint32_t k = 2; k <= 20; ++k) {
        const BigRat bk = beta(k);
        EXPECT_GT(bk, BigRat(1, 8)) << "k=" << k;
        EXPECT_LT(bk, BigRat(1)) << "k=" << k;
        if (k > 2) {
            EXPECT_GT(bk, prev) << "k=" << k;
        }
        const BigRat diff = bk - BigRat(1, 4);
        const BigRat bound(BigInt(4), BigInt(1) << k);  // 2^{-k+2}
        EXPECT_LE(mp::abs(diff), bound) << "k=" << k;
        prev = bk;
    }
}

TEST(TimeScales, FrozenValues) {
    EXPECT_EQ(K_of(0.125), 5);
    EXPECT_EQ(K_prime_of(0.125), 4);
    EXPECT_EQ(K_of(0.5), 3);
    EXPECT_THROW(K_of(0.0), std::invalid_argument);
    EXPECT_THROW(K_of(1.0), std::invalid_argument);
    EXPECT_THROW(K_prime_of(-1.0), std::invalid_argument);
}

TEST(Annulus, PaperMembership) {
    const ParamSchedule sched = ParamSchedule::paper(2);
    EXPECT_TRUE(sched.annulus_contains(1, {2, 0}));
    EXPECT_FALSE(sched.annulus_contains(1, {5, 0}));
    EXPECT_FALSE(sched.annulus_contains(1, {0, 0}));
    EXPECT_FALSE(sched.annulus_contains(2, {0, 0}));
}

// Boundary membership must be decided by exact integer arithmetic.
TEST(Annulus, ExactBoundaries) {
    const ParamSchedule sched = ParamSchedule::desk(big({1, 10}), big({5}), big({5}));
    EXPECT_TRUE(sched.annulus_contains(1, {3, 4}));  // |x| = 5 exactly
    EXPECT_TRUE(sched.annulus_contains(1, {4, 3}));
    EXPECT_TRUE(sched.annulus_contains(1, {5, 0}));
    EXPECT_FALSE(sched.annulus_contains(1, {4, 4}));  // norm2 32 > 25
    EXPECT_FALSE(sched.annulus_contains(1, {3, 3}));  // norm2 18 < 25
}

TEST(ScheduleJson, RoundTrip) {
    const ParamSchedule paper = ParamSchedule::paper(6);
    const ParamSchedule back = ParamSchedule::from_json(paper.to_json());
    EXPECT_TRUE(paper == back);
    EXPECT_EQ(back.kind(), ScheduleKind::paper);

    const auto j = paper.to_json();
    EXPECT_EQ(j.at("s")[1].get<std::string>(), "4");
    EXPECT_EQ(j.at("inner")[0].get<std::string>(), "2");
}

TEST(ScheduleJson, ParsesHandWrittenDocument) {
    const auto doc = nlohmann::json::parse(
        R"({"kind":"desk","s":["1","4","64"],"inner":["2","8"],"outer":["4","64"]})");
    const ParamSchedule sched = ParamSchedule::from_json(doc);
    EXPECT_EQ(sched.k_max(), 2u);
    EXPECT_EQ(sched.boundary(2), BigInt(64));
    EXPECT_EQ(sched.kind(), ScheduleKind::desk);
}

TEST(DemoSchedules, ValidAndSized) {
    const ParamSchedule tiny = demo_schedule("tiny");
    EXPECT_EQ(tiny.k_max(), 4u);
    EXPECT_EQ(tiny.boundary_u64(4), 5u);
    const ParamSchedule small = demo_schedule("small");
    EXPECT_EQ(small.k_max(), 8u);
    EXPECT_EQ(small.boundary_u64(4), 10u);
    EXPECT_EQ(small.boundary_u64(8), 22u);
    EXPECT_THROW(demo_schedule("nope"), std::invalid_argument);
}

}  // namespace
