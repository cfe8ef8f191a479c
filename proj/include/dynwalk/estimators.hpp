// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo harness. Every trial draws its randomness from a stream keyed
// by (master_seed, trial index), and cross-worker aggregation is integer
// counting, so every estimate is a pure function of its plan no matter how
// many workers run it.
#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dynwalk/enumerate.hpp"
#include "dynwalk/errors.hpp"
#include "dynwalk/events.hpp"
#include "dynwalk/dirichlet.hpp"
#include "dynwalk/rng.hpp"
#include "dynwalk/schedule.hpp"
#include "dynwalk/stats.hpp"
#include "dynwalk/timeline.hpp"

namespace dynwalk {

struct TrialPlan {
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    unsigned workers = 1;
};

namespace detail {

/// Runs fn(trial_seed) for every trial and sums the returned flag vectors.
/// Striding by trial index keeps the result independent of worker count.
template <std::size_t K, class Fn>
std::array<std::uint64_t, K> count_flags(const TrialPlan& plan, Fn&& fn) {
    if (plan.trials == 0) throw std::invalid_argument("count_flags: trials must be >= 1");
    const unsigned workers = std::max(1u, plan.workers);
    std::vector<std::array<std::uint64_t, K>> partial(workers, std::array<std::uint64_t, K>{});
    auto body = [&](unsigned w) {
        auto& acc = partial[w];
        for (std::uint64_t i = w; i < plan.trials; i += workers) {
            const std::array<bool, K> flags = fn(derive_stream(plan.master_seed, stream_tag::trial, i));
            for (std::size_t f = 0; f < K; ++f) acc[f] += flags[f] ? 1 : 0;
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }
    std::array<std::uint64_t, K> total{};
    for (const auto& acc : partial)
        for (std::size_t f = 0; f < K; ++f) total[f] += acc[f];
    return total;
}

/// Evaluates fn(index) for index in [0, count) into a vector; parallel but
/// positionally deterministic.
template <class Fn>
std::vector<double> map_indexed(std::uint64_t count, unsigned workers, Fn&& fn) {
    std::vector<double> out(count, 0.0);
    const unsigned w_count = std::max(1u, workers);
    auto body = [&](unsigned w) {
        for (std::uint64_t i = w; i < count; i += w_count) out[i] = fn(i);
    };
    if (w_count == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < w_count; ++w) pool.emplace_back(body, w);
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace detail

/// Generic Bernoulli experiment over derived per-trial seeds.
inline McEstimate estimate_event(const TrialPlan& plan,
                                 const std::function<bool(std::uint64_t)>& detector,
                                 std::optional<double> reference = {}) {
    const auto counts =
        detail::count_flags<1>(plan, [&](std::uint64_t seed) { return std::array<bool, 1>{detector(seed)}; });
    return make_estimate(plan.trials, counts[0], reference);
}

/// Where a simulated excursion starts: a fixed lattice point, or a uniform
/// draw from the lattice points of annulus k.
struct StartSpec {
    enum class Kind { fixed, annulus };
    Kind kind = Kind::fixed;
    Point point{};
    std::uint32_t annulus_k = 0;

    static StartSpec fixed(Point p) { return {Kind::fixed, p, 0}; }
    static StartSpec annulus(std::uint32_t k) { return {Kind::annulus, kOrigin, k}; }
};

/// All lattice points of annulus k, in scan order.
inline std::vector<Point> annulus_lattice_points(const ParamSchedule& sched, std::uint32_t k) {
    if (sched.outer_radius(k) > 4096)
        throw ResourceError("annulus_lattice_points: outer radius too large to enumerate");
    const std::int64_t outer = sched.outer_radius(k).convert_to<std::int64_t>();
    std::vector<Point> pts;
    for (std::int64_t y = -outer; y <= outer; ++y)
        for (std::int64_t x = -outer; x <= outer; ++x)
            if (sched.annulus_contains(k, {x, y})) pts.push_back({x, y});
    if (pts.empty()) throw std::invalid_argument("annulus_lattice_points: empty annulus");
    return pts;
}

/// Resolves a StartSpec against a schedule once (annulus points are
/// enumerated up front) and then draws starts per trial.
class StartSampler {
  public:
    StartSampler(const ParamSchedule& sched, const StartSpec& spec) : spec_(spec) {
        if (spec.kind == StartSpec::Kind::annulus)
            points_ = annulus_lattice_points(sched, spec.annulus_k);
    }

    Point draw(SplitMix64& rng) const {
        if (spec_.kind == StartSpec::Kind::fixed) return spec_.point;
        return points_[rng.below(points_.size())];
    }

    bool fixed() const { return spec_.kind == StartSpec::Kind::fixed; }
    Point fixed_point() const { return spec_.point; }

  private:
    StartSpec spec_;
    std::vector<Point> points_;
};

/// Worst-case style start: the point on annulus k's inner radius in
/// direction (1, 0).
inline StartSpec inner_edge_start(const ParamSchedule& sched, std::uint32_t k) {
    const BigInt& r = sched.inner_radius(k);
    if (r > std::numeric_limits<std::int64_t>::max())
        throw ResourceError("inner_edge_start: radius exceeds lattice range");
    return StartSpec::fixed({r.convert_to<std::int64_t>(), 0});
}

/// Simulates walks from x until they reach the field's target set or leave
/// the radius-n ball; the exact solution supplies the reference and z-score.
inline McEstimate estimate_hit_before_exit(Point x, const HitProbField& field,
                                           const TrialPlan& plan) {
    const std::int64_t n2 = std::int64_t(field.radius()) * field.radius();
    if (x.norm2() == 0 || x.norm2() >= n2)
        throw std::invalid_argument("estimate_hit_before_exit: need 0 < |x| < n");
    const std::vector<Point> targets = field.targets();
    auto detector = [&](std::uint64_t seed) -> std::array<bool, 1> {
        SplitMix64 rng(seed);
        Point p = x;
        for (std::uint64_t guard = 0; guard < 100'000'000ull; ++guard) {
            for (const Point& tgt : targets)
                if (p == tgt) return {true};
            if (p.norm2() >= n2) return {false};
            p += rng.direction();
        }
        throw ConvergenceError("estimate_hit_before_exit: walk exceeded step guard");
    };
    const auto counts = detail::count_flags<1>(plan, detector);
    return make_estimate(plan.trials, counts[0], field.value(x));
}

inline McEstimate estimate_hit_before_exit(Point x, int n, const TrialPlan& plan) {
    return estimate_hit_before_exit(x, solve_hit_before_exit(n), plan);
}

/// Per-segment hit/clean-hit/annulus-end estimates from a start distribution.
/// For fixed starts on segments of at most 10 steps, exact enumeration
/// references (and z-scores) are attached.
struct SegmentLemmaReport {
    std::uint32_t j = 0;
    std::uint64_t length = 0;
    McEstimate hit, clean_hit, end_in_annulus;
};

/// One segment excursion at time zero; drives both the counting estimators
/// and the per-trial outcome dumps, so the two stay draw-for-draw identical.
struct SegmentTrialFlags {
    bool hit_disc = false;
    bool hit_origin = false;
    bool end_in_annulus = false;
};

inline SegmentTrialFlags segment_trial(const ParamSchedule& sched, std::uint32_t j,
                                       std::uint64_t length, const StartSampler& sampler,
                                       std::uint64_t trial_seed) {
    SplitMix64 rng(trial_seed);
    Point p = sampler.draw(rng);
    SegmentTrialFlags f;
    for (std::uint64_t m = 0; m < length; ++m) {
        f.hit_disc = f.hit_disc || on_unit_circle(p);
        f.hit_origin = f.hit_origin || p == kOrigin;
        p += rng.direction();
    }
    f.end_in_annulus = sched.annulus_contains(j, p);
    return f;
}

inline SegmentLemmaReport estimate_segment_lemmas(const ParamSchedule& sched, std::uint32_t j,
                                                  const StartSpec& start, const TrialPlan& plan) {
    const std::uint64_t L = sched.segment_length_u64(j);
    if (L > 10'000'000ull) throw ResourceError("estimate_segment_lemmas: segment exceeds step budget");
    const StartSampler sampler(sched, start);
    auto trial = [&](std::uint64_t seed) -> std::array<bool, 3> {
        const SegmentTrialFlags f = segment_trial(sched, j, L, sampler, seed);
        return {f.hit_disc, f.hit_disc && !f.hit_origin, f.end_in_annulus};
    };
    const auto counts = detail::count_flags<3>(plan, trial);

    std::optional<double> hit_ref, clean_ref, annulus_ref;
    if (sampler.fixed() && L <= 10) {
        const Point x = sampler.fixed_point();
        const int m = static_cast<int>(L);
        auto window_hits = [&](const std::vector<Point>& path) {
            bool hd = false;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) hd = hd || on_unit_circle(path[i]);
            return hd;
        };
        auto window_clean = [&](const std::vector<Point>& path) {
            bool hd = false, ho = false;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                hd = hd || on_unit_circle(path[i]);
                ho = ho || path[i] == kOrigin;
            }
            return hd && !ho;
        };
        hit_ref = brute_force(m, x, window_hits).probability();
        clean_ref = brute_force(m, x, window_clean).probability();
        annulus_ref = brute_force(m, x, [&](const std::vector<Point>& path) {
                          return sched.annulus_contains(j, path.back());
                      }).probability();
    }

    SegmentLemmaReport rep;
    rep.j = j;
    rep.length = L;
    rep.hit = make_estimate(plan.trials, counts[0], hit_ref);
    rep.clean_hit = make_estimate(plan.trials, counts[1], clean_ref);
    rep.end_in_annulus = make_estimate(plan.trials, counts[2], annulus_ref);
    return rep;
}

/// Two-time segment estimates from one clocked walk per trial: marginal and
/// joint hit/clean-hit probabilities plus the correlation ratio
/// joint / (marginal_0 * marginal_t).
struct JointSegmentReport {
    std::uint32_t j = 0;
    double t = 0.0;
    McEstimate hit_joint, hit_at0, hit_att;
    RatioEstimate hit_ratio;
    McEstimate clean_joint, clean_at0, clean_att;
    RatioEstimate clean_ratio;
};

/// One segment excursion observed at times 0 and t on a shared clocked walk.
struct JointSegmentTrialFlags {
    SegmentTrialFlags at0, att;
};

inline JointSegmentTrialFlags joint_segment_trial(const ParamSchedule& sched, std::uint32_t j,
                                                  std::uint64_t length, double t, double horizon,
                                                  const StartSampler& sampler,
                                                  std::uint64_t trial_seed) {
    SplitMix64 start_rng(derive_stream(trial_seed, stream_tag::start));
    const Point x = sampler.draw(start_rng);
    const Point y = sampler.fixed() ? x : sampler.draw(start_rng);
    JointSegmentTrialFlags f;
    Point p0 = x, pt = y;
    for (std::uint64_t i = 1; i <= length; ++i) {
        const StepTimeline tl = make_timeline(trial_seed, i, horizon);
        f.at0.hit_disc = f.at0.hit_disc || on_unit_circle(p0);
        f.at0.hit_origin = f.at0.hit_origin || p0 == kOrigin;
        f.att.hit_disc = f.att.hit_disc || on_unit_circle(pt);
        f.att.hit_origin = f.att.hit_origin || pt == kOrigin;
        p0 += tl.value_at(0.0);
        pt += tl.value_at(t);
    }
    f.at0.end_in_annulus = sched.annulus_contains(j, p0);
    f.att.end_in_annulus = sched.annulus_contains(j, pt);
    return f;
}

inline JointSegmentReport estimate_joint_segment(const ParamSchedule& sched, std::uint32_t j,
                                                 double t, const StartSpec& start,
                                                 const TrialPlan& plan) {
    if (!(t >= 0.0)) throw std::invalid_argument("estimate_joint_segment: t must be >= 0");
    const std::uint64_t L = sched.segment_length_u64(j);
    if (L > 10'000'000ull) throw ResourceError("estimate_joint_segment: segment exceeds step budget");
    const double horizon = std::max(1.0, t);
    const StartSampler sampler(sched, start);
    auto trial = [&](std::uint64_t seed) -> std::array<bool, 6> {
        const JointSegmentTrialFlags f = joint_segment_trial(sched, j, L, t, horizon, sampler, seed);
        const bool hit0 = f.at0.hit_disc, hitt = f.att.hit_disc;
        const bool clean0 = f.at0.hit_disc && !f.at0.hit_origin;
        const bool cleant = f.att.hit_disc && !f.att.hit_origin;
        return {hit0, hitt, hit0 && hitt, clean0, cleant, clean0 && cleant};
    };
    const auto c = detail::count_flags<6>(plan, trial);
    JointSegmentReport rep;
    rep.j = j;
    rep.t = t;
    rep.hit_at0 = make_estimate(plan.trials, c[0]);
    rep.hit_att = make_estimate(plan.trials, c[1]);
    rep.hit_joint = make_estimate(plan.trials, c[2]);
    rep.hit_ratio = ratio_joint_over_product(plan.trials, c[2], c[0], c[1]);
    rep.clean_at0 = make_estimate(plan.trials, c[3]);
    rep.clean_att = make_estimate(plan.trials, c[4]);
    rep.clean_joint = make_estimate(plan.trials, c[5]);
    rep.clean_ratio = ratio_joint_over_product(plan.trials, c[5], c[3], c[4]);
    return rep;
}

/// Two-time super-segment estimates (the exactly-one-clean-hit event).
struct JointSuperReport {
    std::uint32_t k = 0;
    double t = 0.0;
    McEstimate holds_joint, holds_at0, holds_att;
    RatioEstimate ratio;
};

/// One super-segment excursion observed at times 0 and t.
struct JointSuperTrialFlags {
    bool holds_at0 = false;
    bool holds_att = false;
};

inline JointSuperTrialFlags joint_super_trial(const ParamSchedule& sched, std::uint32_t k,
                                              double t, double horizon, GRange grange,
                                              const StartSampler& sampler,
                                              std::uint64_t trial_seed) {
    const std::uint64_t base = sched.boundary_u64((std::uint32_t(1) << k) - 1);
    const std::uint64_t L = super_required_steps(sched, k, grange) - base;
    SplitMix64 start_rng(derive_stream(trial_seed, stream_tag::start));
    const Point x = sampler.draw(start_rng);
    const Point y = sampler.fixed() ? x : sampler.draw(start_rng);
    std::vector<Point> pos0(L + 1), post(L + 1);
    pos0[0] = x;
    post[0] = y;
    for (std::uint64_t i = 1; i <= L; ++i) {
        const StepTimeline tl = make_timeline(trial_seed, i, horizon);
        pos0[i] = pos0[i - 1] + tl.value_at(0.0);
        post[i] = post[i - 1] + tl.value_at(t);
    }
    return {super_outcome(pos0, base, k, sched, grange).holds,
            super_outcome(post, base, k, sched, grange).holds};
}

inline JointSuperReport estimate_joint_super(const ParamSchedule& sched, std::uint32_t k, double t,
                                             const StartSpec& start, const TrialPlan& plan,
                                             GRange grange = GRange::through_next) {
    if (!(t >= 0.0)) throw std::invalid_argument("estimate_joint_super: t must be >= 0");
    const std::uint64_t base = sched.boundary_u64((std::uint32_t(1) << k) - 1);
    const std::uint64_t L = super_required_steps(sched, k, grange) - base;
    if (L > 10'000'000ull) throw ResourceError("estimate_joint_super: super-segment exceeds step budget");
    const double horizon = std::max(1.0, t);
    const StartSampler sampler(sched, start);
    auto trial = [&](std::uint64_t seed) -> std::array<bool, 3> {
        const JointSuperTrialFlags f = joint_super_trial(sched, k, t, horizon, grange, sampler, seed);
        return {f.holds_at0, f.holds_att, f.holds_at0 && f.holds_att};
    };
    const auto c = detail::count_flags<3>(plan, trial);
    JointSuperReport rep;
    rep.k = k;
    rep.t = t;
    rep.holds_at0 = make_estimate(plan.trials, c[0]);
    rep.holds_att = make_estimate(plan.trials, c[1]);
    rep.holds_joint = make_estimate(plan.trials, c[2]);
    rep.ratio = ratio_joint_over_product(plan.trials, c[2], c[0], c[1]);
    return rep;
}

/// Conditional re-randomization experiment: fix one base path over
/// [1, window_end], resample a fresh uniform subset of {1..n} of the given
/// size each trial, and estimate the probability of visiting the origin at
/// some step in [n, window_end]. The companion "unconditional" estimate
/// resamples all of {1..n}.
struct DecorrelationReport {
    std::uint64_t n = 0;
    std::uint64_t window_end = 0;
    std::uint64_t subset_size = 0;
    std::uint64_t path_seed = 0;
    McEstimate conditional, unconditional;
};

inline DecorrelationReport estimate_resample_decorrelation(std::uint64_t n,
                                                           std::uint64_t window_end,
                                                           std::uint64_t subset_size,
                                                           const TrialPlan& plan,
                                                           std::optional<std::uint64_t> path_seed = {}) {
    if (n == 0 || window_end < n) throw std::invalid_argument("decorrelation: need 1 <= n <= window_end");
    if (subset_size > n) throw std::invalid_argument("decorrelation: subset size exceeds n");
    if (window_end > 10'000'000ull) throw ResourceError("decorrelation: window exceeds step budget");

    const std::uint64_t pseed =
        path_seed.value_or(derive_stream(plan.master_seed, stream_tag::base_path));
    std::vector<Direction> base(window_end);
    {
        SplitMix64 rng(pseed);
        for (auto& d : base) d = rng.direction();
    }

    auto run = [&](std::uint64_t master, std::uint64_t size) {
        TrialPlan sub = plan;
        sub.master_seed = master;
        auto trial = [&](std::uint64_t seed) -> std::array<bool, 1> {
            SplitMix64 rng(derive_stream(seed, stream_tag::subset));
            std::vector<Direction> dirs = base;
            if (size == n) {
                for (std::uint64_t i = 0; i < n; ++i) dirs[i] = rng.direction();
            } else if (size > 0) {
                std::vector<std::uint64_t> idx(n);
                for (std::uint64_t i = 0; i < n; ++i) idx[i] = i;
                for (std::uint64_t i = 0; i < size; ++i) {
                    const std::uint64_t j = i + rng.below(n - i);
                    std::swap(idx[i], idx[j]);
                    dirs[idx[i]] = rng.direction();
                }
            }
            Point p = kOrigin;
            bool hit = false;
            for (std::uint64_t m = 1; m <= window_end; ++m) {
                p += dirs[m - 1];
                if (m >= n && p == kOrigin) {
                    hit = true;
                    break;
                }
            }
            return {hit};
        };
        const auto counts = detail::count_flags<1>(sub, trial);
        return make_estimate(sub.trials, counts[0]);
    };

    DecorrelationReport rep;
    rep.n = n;
    rep.window_end = window_end;
    rep.subset_size = subset_size;
    rep.path_seed = pseed;
    rep.conditional = run(plan.master_seed, subset_size);
    rep.unconditional = run(derive_stream(plan.master_seed, 0x756e636f6e64ull), n);
    return rep;
}

/// Second-moment style ratio P(all super events hold at 0 and t) divided by
/// P(all hold at 0)^2, over whole walks from the origin. Refuses when the
/// marginal estimate falls below `floor`.
struct FmtRatioReport {
    std::uint32_t m_levels = 0;
    double t = 0.0;
    McEstimate joint, marginal0, marginalt;
    RatioEstimate ratio;
};

inline FmtRatioReport estimate_fmt_ratio(const ParamSchedule& sched, std::uint32_t m_levels,
                                         double t, const TrialPlan& plan,
                                         GRange grange = GRange::through_next,
                                         double floor = 1e-3) {
    if (!(t >= 0.0)) throw std::invalid_argument("estimate_fmt_ratio: t must be >= 0");
    FmtRatioReport rep;
    rep.m_levels = m_levels;
    rep.t = t;
    if (m_levels == 0) {
        rep.joint = make_estimate(plan.trials, plan.trials);
        rep.marginal0 = rep.joint;
        rep.marginalt = rep.joint;
        rep.ratio = RatioEstimate{1.0, 1.0, 1.0};
        return rep;
    }
    const std::uint64_t n = super_required_steps(sched, m_levels, grange);
    if (n > 10'000'000ull) throw ResourceError("estimate_fmt_ratio: walk exceeds step budget");
    const double horizon = std::max(1.0, t);
    auto trial = [&](std::uint64_t seed) -> std::array<bool, 3> {
        std::vector<Point> pos0(n + 1), post(n + 1);
        pos0[0] = kOrigin;
        post[0] = kOrigin;
        for (std::uint64_t i = 1; i <= n; ++i) {
            const StepTimeline tl = make_timeline(seed, i, horizon);
            pos0[i] = pos0[i - 1] + tl.value_at(0.0);
            post[i] = post[i - 1] + tl.value_at(t);
        }
        bool all0 = true, allt = true;
        for (std::uint32_t k = 1; k <= m_levels && (all0 || allt); ++k) {
            if (all0) all0 = super_outcome(pos0, 0, k, sched, grange).holds;
            if (allt) allt = super_outcome(post, 0, k, sched, grange).holds;
        }
        return {all0, allt, all0 && allt};
    };
    const auto c = detail::count_flags<3>(plan, trial);
    rep.marginal0 = make_estimate(plan.trials, c[0]);
    rep.marginalt = make_estimate(plan.trials, c[1]);
    rep.joint = make_estimate(plan.trials, c[2]);
    if (rep.marginal0.estimate < floor)
        throw RefusalError("estimate_fmt_ratio: marginal probability " +
                           std::to_string(rep.marginal0.estimate) + " below floor " +
                           std::to_string(floor));
    rep.ratio = ratio_joint_over_square(plan.trials, c[2], c[0]);
    return rep;
}

/// Declarative experiment description: which lemma estimator to run and with
/// what geometry, start distribution, second time and trial plan. The CLI
/// front end builds one of these per invocation.
struct ExperimentSpec {
    std::string lemma;  // hit-before-exit | segment | joint-segment | joint-super |
                        // resample-decorrelation | fmt-ratio
    std::optional<ParamSchedule> schedule;
    std::uint32_t j = 2;
    std::uint32_t k = 1;
    std::uint32_t m_levels = 1;
    double t = 0.5;
    StartSpec start = StartSpec::fixed(kOrigin);
    GRange grange = GRange::through_next;
    Point x{1, 0};           // hit-before-exit start
    int radius = 2;          // hit-before-exit exit radius
    std::uint64_t n = 32;    // decorrelation prefix length
    std::uint64_t window_end = 512;
    std::uint64_t subset_size = 0;
    double floor = 1e-3;     // fmt-ratio refusal floor
    TrialPlan plan;
};

/// Uniform result shape for serialization: labelled estimates plus any
/// ratio statistics, with a canonical parameter string.
struct ExperimentReport {
    std::string params;
    std::vector<std::pair<std::string, McEstimate>> estimates;
    std::vector<std::pair<std::string, RatioEstimate>> ratios;
};

inline ExperimentReport run_experiment(const ExperimentSpec& spec) {
    char buf[160];
    ExperimentReport rep;
    auto require_schedule = [&]() -> const ParamSchedule& {
        if (!spec.schedule) throw std::invalid_argument("experiment '" + spec.lemma +
                                                        "' needs a schedule");
        return *spec.schedule;
    };
    auto start_str = [&]() {
        if (spec.start.kind == StartSpec::Kind::fixed) {
            std::snprintf(buf, sizeof(buf), "fixed:%lld:%lld",
                          static_cast<long long>(spec.start.point.x),
                          static_cast<long long>(spec.start.point.y));
        } else {
            std::snprintf(buf, sizeof(buf), "annulus:%u", spec.start.annulus_k);
        }
        return std::string(buf);
    };

    if (spec.lemma == "hit-before-exit") {
        const McEstimate e = estimate_hit_before_exit(spec.x, spec.radius, spec.plan);
        std::snprintf(buf, sizeof(buf), "x=%lld:%lld;n=%d", static_cast<long long>(spec.x.x),
                      static_cast<long long>(spec.x.y), spec.radius);
        rep.params = buf;
        rep.estimates = {{"hit-before-exit", e}};
        return rep;
    }
    if (spec.lemma == "segment") {
        const SegmentLemmaReport r =
            estimate_segment_lemmas(require_schedule(), spec.j, spec.start, spec.plan);
        std::snprintf(buf, sizeof(buf), "j=%u;start=%s", spec.j, start_str().c_str());
        rep.params = buf;
        rep.estimates = {{"segment-hit", r.hit},
                         {"segment-clean-hit", r.clean_hit},
                         {"segment-annulus-end", r.end_in_annulus}};
        return rep;
    }
    if (spec.lemma == "joint-segment") {
        const JointSegmentReport r =
            estimate_joint_segment(require_schedule(), spec.j, spec.t, spec.start, spec.plan);
        std::snprintf(buf, sizeof(buf), "j=%u;t=%.17g;start=%s", spec.j, spec.t,
                      start_str().c_str());
        rep.params = buf;
        rep.estimates = {{"hit-at0", r.hit_at0},       {"hit-att", r.hit_att},
                         {"hit-joint", r.hit_joint},   {"clean-hit-at0", r.clean_at0},
                         {"clean-hit-att", r.clean_att}, {"clean-hit-joint", r.clean_joint}};
        rep.ratios = {{"hit-ratio", r.hit_ratio}, {"clean-hit-ratio", r.clean_ratio}};
        return rep;
    }
    if (spec.lemma == "joint-super") {
        const JointSuperReport r = estimate_joint_super(require_schedule(), spec.k, spec.t,
                                                        spec.start, spec.plan, spec.grange);
        std::snprintf(buf, sizeof(buf), "k=%u;t=%.17g;start=%s;grange=%s", spec.k, spec.t,
                      start_str().c_str(),
                      spec.grange == GRange::through_next ? "through-next" : "within");
        rep.params = buf;
        rep.estimates = {{"super-at0", r.holds_at0},
                         {"super-att", r.holds_att},
                         {"super-joint", r.holds_joint}};
        rep.ratios = {{"super-ratio", r.ratio}};
        return rep;
    }
    if (spec.lemma == "resample-decorrelation") {
        const DecorrelationReport r =
            estimate_resample_decorrelation(spec.n, spec.window_end, spec.subset_size, spec.plan);
        std::snprintf(buf, sizeof(buf), "n=%llu;window=%llu;subset=%llu;path_seed=%llu",
                      static_cast<unsigned long long>(spec.n),
                      static_cast<unsigned long long>(spec.window_end),
                      static_cast<unsigned long long>(spec.subset_size),
                      static_cast<unsigned long long>(r.path_seed));
        rep.params = buf;
        rep.estimates = {{"conditional", r.conditional}, {"unconditional", r.unconditional}};
        return rep;
    }
    if (spec.lemma == "fmt-ratio") {
        const FmtRatioReport r = estimate_fmt_ratio(require_schedule(), spec.m_levels, spec.t,
                                                    spec.plan, spec.grange, spec.floor);
        std::snprintf(buf, sizeof(buf), "M=%u;t=%.17g", spec.m_levels, spec.t);
        rep.params = buf;
        rep.estimates = {{"joint", r.joint},
                         {"marginal-at0", r.marginal0},
                         {"marginal-att", r.marginalt}};
        rep.ratios = {{"fmt-ratio", r.ratio}};
        return rep;
    }
    throw std::invalid_argument("unknown lemma '" + spec.lemma + "'");
}

}  // namespace dynwalk
