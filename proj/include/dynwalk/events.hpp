// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Event detectors over a realized path at a fixed time. Per segment j the
// walk can hit the discrete unit circle ("hit"), hit the origin, and end
// inside annulus j. A super-segment k "holds" when exactly one of its
// segments hits the circle, that hit avoids the origin, and every segment
// end in the configured range lands in its annulus.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dynwalk/schedule.hpp"
#include "dynwalk/walk.hpp"

namespace dynwalk {

struct SegmentOutcome {
    std::uint32_t j = 0;
    bool hit_disc = false;       // some S_m with m in M_j lies on the unit circle
    bool hit_origin = false;     // some S_m with m in M_j is the origin
    bool end_in_annulus = false; // S_{s_j} lies in annulus j

    bool hit() const { return hit_disc; }
    bool clean_hit() const { return hit_disc && !hit_origin; }
};

/// Upper index of the annulus-pinning range inside super-segment k.
/// `through_next` extends it one segment past the block (the default);
/// `within` stops at the block's last segment.
enum class GRange { through_next, within };

inline std::uint32_t g_range_end(std::uint32_t k, GRange grange) {
    const std::uint32_t next = std::uint32_t(1) << (k + 1);
    return grange == GRange::through_next ? next : next - 1;
}

/// Last path step a super-segment detector needs: s at the end of the G range.
inline std::uint64_t super_required_steps(const ParamSchedule& sched, std::uint32_t k,
                                          GRange grange) {
    return sched.boundary_u64(g_range_end(k, grange));
}

struct SuperSegmentOutcome {
    std::uint32_t k = 0;
    std::vector<SegmentOutcome> segments;  // j in [2^k, 2^{k+1})
    bool all_ends_in_annuli = false;       // every segment end in the G range
    bool holds = false;
    std::optional<std::uint32_t> witness;  // the unique clean-hit segment, when holds
};

/// Flags for segment j from a window of positions covering steps
/// [s_{j-1}, s_j]. `base_step` is the absolute step index of positions[0].
inline SegmentOutcome segment_outcome(std::span<const Point> positions, std::uint64_t base_step,
                                      std::uint32_t j, const ParamSchedule& sched) {
    auto [lo_big, hi_big] = sched.segment_range(j);
    if (lo_big < base_step) throw std::invalid_argument("segment_outcome: window starts past s_{j-1}");
    if (hi_big - base_step >= positions.size())
        throw std::invalid_argument("segment_outcome: path does not cover the segment");
    const std::uint64_t lo = (lo_big - base_step).convert_to<std::uint64_t>();
    const std::uint64_t hi = (hi_big - base_step).convert_to<std::uint64_t>();
    SegmentOutcome out;
    out.j = j;
    for (std::uint64_t m = lo; m < hi; ++m) {
        const Point p = positions[m];
        out.hit_disc = out.hit_disc || on_unit_circle(p);
        out.hit_origin = out.hit_origin || p == kOrigin;
    }
    out.end_in_annulus = sched.annulus_contains(j, positions[hi]);
    return out;
}

inline SegmentOutcome detect_segment(const PathView& path, std::uint32_t j,
                                     const ParamSchedule& sched) {
    return segment_outcome(path.positions, 0, j, sched);
}

inline SuperSegmentOutcome super_outcome(std::span<const Point> positions,
                                         std::uint64_t base_step, std::uint32_t k,
                                         const ParamSchedule& sched,
                                         GRange grange = GRange::through_next) {
    const std::uint32_t lo = std::uint32_t(1) << k;
    const std::uint32_t hi = std::uint32_t(1) << (k + 1);
    SuperSegmentOutcome out;
    out.k = k;
    int hits = 0;
    int clean_hits = 0;
    std::optional<std::uint32_t> clean_j;
    for (std::uint32_t j = lo; j < hi; ++j) {
        SegmentOutcome seg = segment_outcome(positions, base_step, j, sched);
        hits += seg.hit() ? 1 : 0;
        if (seg.clean_hit()) {
            ++clean_hits;
            clean_j = j;
        }
        out.segments.push_back(seg);
    }
    out.all_ends_in_annuli = true;
    for (std::uint32_t i = lo; i <= g_range_end(k, grange); ++i) {
        const std::uint64_t end = sched.boundary_u64(i);
        if (end < base_step || end - base_step >= positions.size())
            throw std::invalid_argument("super_outcome: path does not cover the annulus range");
        if (!sched.annulus_contains(i, positions[end - base_step])) {
            out.all_ends_in_annuli = false;
            break;
        }
    }
    out.holds = hits == 1 && clean_hits == 1 && out.all_ends_in_annuli;
    if (out.holds) out.witness = clean_j;
    return out;
}

inline SuperSegmentOutcome detect_super(const PathView& path, std::uint32_t k,
                                        const ParamSchedule& sched,
                                        GRange grange = GRange::through_next) {
    return super_outcome(path.positions, 0, k, sched, grange);
}

/// Same detector evaluated at times 0 and t on one clocked walk, plus the
/// two-time conjunctions.
struct JointSegmentOutcome {
    SegmentOutcome at0, att;
    bool hit_both = false;
    bool clean_hit_both = false;
};

inline JointSegmentOutcome detect_segment_joint(const WalkConfig& cfg, std::uint32_t j,
                                                const ParamSchedule& sched, double t) {
    const std::uint64_t n = sched.boundary_u64(j);
    JointSegmentOutcome out;
    out.at0 = detect_segment(path_view(cfg, n, 0.0), j, sched);
    out.att = detect_segment(path_view(cfg, n, t), j, sched);
    out.hit_both = out.at0.hit() && out.att.hit();
    out.clean_hit_both = out.at0.clean_hit() && out.att.clean_hit();
    return out;
}

struct JointSuperOutcome {
    SuperSegmentOutcome at0, att;
    bool holds_both = false;
};

inline JointSuperOutcome detect_super_joint(const WalkConfig& cfg, std::uint32_t k,
                                            const ParamSchedule& sched, double t,
                                            GRange grange = GRange::through_next) {
    const std::uint64_t n = super_required_steps(sched, k, grange);
    JointSuperOutcome out;
    out.at0 = detect_super(path_view(cfg, n, 0.0), k, sched, grange);
    out.att = detect_super(path_view(cfg, n, t), k, sched, grange);
    out.holds_both = out.at0.holds && out.att.holds;
    return out;
}

}  // namespace dynwalk
