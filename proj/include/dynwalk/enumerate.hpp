// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive small-instance oracles. Single-time: enumerate all 4^m
// continuations of an m-step walk and count the ones satisfying a path
// predicate, giving an exact rational with denominator 4^m. Two-time:
// enumerate pairs of paths, weighting each index by the exact probability
// that a rate-one clock left the step unchanged (e^-t) or redrew it.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "dynwalk/errors.hpp"
#include "dynwalk/lattice.hpp"
#include "dynwalk/schedule.hpp"

namespace dynwalk {

struct ExactEventProb {
    int steps = 0;
    Point start{};
    std::uint64_t hits = 0;
    std::uint64_t total = 1;  // 4^steps

    double probability() const { return static_cast<double>(hits) / static_cast<double>(total); }
    BigRat exact() const { return BigRat(hits, total); }
};

/// Exact probability of `predicate` over all 4^m walks of m steps from
/// `start`. The predicate sees positions S_0..S_m (S_0 = start).
template <class Pred>
ExactEventProb brute_force(int m, Point start, Pred&& predicate) {
    if (m < 0 || m > 10) throw ResourceError("brute_force: m outside [0, 10]");
    ExactEventProb out;
    out.steps = m;
    out.start = start;
    out.total = std::uint64_t(1) << (2 * m);
    std::vector<Point> path(static_cast<std::size_t>(m) + 1, start);
    for (std::uint64_t code = 0; code < out.total; ++code) {
        std::uint64_t c = code;
        Point p = start;
        for (int i = 1; i <= m; ++i, c >>= 2) {
            p += kDirections[c & 3];
            path[i] = p;
        }
        if (predicate(path)) ++out.hits;
    }
    return out;
}

/// Exact probability of a two-time path event: the time-0 walk takes path a,
/// and by time t each step independently keeps its value (probability e^-t)
/// or is redrawn uniformly. The predicate sees both position sequences.
/// Enumerates 4^(2m) path pairs; m is capped at 5.
template <class Pred2>
double brute_force_joint(int m, Point start, double t, Pred2&& predicate) {
    if (m < 0 || m > 5) throw ResourceError("brute_force_joint: m outside [0, 5]");
    if (!(t >= 0.0)) throw std::invalid_argument("brute_force_joint: t must be >= 0");
    const double keep = std::exp(-t);
    const double w_same = keep + (1.0 - keep) * 0.25;
    const double w_diff = (1.0 - keep) * 0.25;
    const std::uint64_t total = std::uint64_t(1) << (2 * m);
    const double base = 1.0 / static_cast<double>(total);

    std::vector<Point> path0(static_cast<std::size_t>(m) + 1, start);
    std::vector<Point> patht(static_cast<std::size_t>(m) + 1, start);
    std::vector<int> dir0(static_cast<std::size_t>(m), 0);

    double sum = 0.0;
    for (std::uint64_t a = 0; a < total; ++a) {
        std::uint64_t c = a;
        Point p = start;
        for (int i = 1; i <= m; ++i, c >>= 2) {
            dir0[i - 1] = static_cast<int>(c & 3);
            p += kDirections[c & 3];
            path0[i] = p;
        }
        for (std::uint64_t b = 0; b < total; ++b) {
            std::uint64_t d = b;
            Point q = start;
            double w = base;
            for (int i = 1; i <= m; ++i, d >>= 2) {
                const int db = static_cast<int>(d & 3);
                q += kDirections[db];
                patht[i] = q;
                w *= (db == dir0[i - 1]) ? w_same : w_diff;
            }
            if (predicate(path0, patht)) sum += w;
        }
    }
    return sum;
}

}  // namespace dynwalk
