// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Segment geometry for the walk: boundaries s_0 < s_1 < ... < s_kmax carve the
// step axis into segments M_j = [s_{j-1}, s_j), dyadic blocks of segments form
// super-segments, and annulus k is the lattice shell
// inner_radius(k) <= |x| <= outer_radius(k). The reference ("paper") schedule
// uses s_k = k^10 * 2^(2k^2) and inner radius 2^(k^2); these overflow 64 bits
// almost immediately, so everything is kept in arbitrary precision. Desk
// schedules are small hand-picked stand-ins that satisfy the same invariants.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dynwalk/errors.hpp"
#include "dynwalk/lattice.hpp"

namespace dynwalk {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class ScheduleKind { paper, desk };

class ParamSchedule {
  public:
    /// Exact reference schedule up to s_kmax.
    static ParamSchedule paper(std::uint32_t k_max) {
        if (k_max < 1) throw std::invalid_argument("ParamSchedule::paper: k_max must be >= 1");
        ParamSchedule sched;
        sched.kind_ = ScheduleKind::paper;
        sched.s_.resize(k_max + 1);
        sched.inner_.resize(k_max + 1);
        sched.outer_.resize(k_max + 1);
        sched.s_[0] = 1;
        for (std::uint32_t k = 1; k <= k_max; ++k) {
            const BigInt pow_k10 = boost::multiprecision::pow(BigInt(k), 10);
            sched.s_[k] = pow_k10 * (BigInt(1) << (2 * k * k));
            sched.inner_[k] = BigInt(1) << (k * k);
            sched.outer_[k] = sched.s_[k];
        }
        sched.validate();
        return sched;
    }

    /// Desk schedule with the default radii rule outer_radius(k) = s_k,
    /// mirroring the reference schedule's annulus shape.
    static ParamSchedule desk(std::vector<BigInt> s, std::vector<BigInt> inner) {
        std::vector<BigInt> outer(s.begin() + 1, s.end());
        return desk(std::move(s), std::move(inner), std::move(outer));
    }

    /// Hand-specified schedule; `s` lists s_0..s_kmax, `inner`/`outer` list the
    /// annulus radii for k = 1..kmax. Rejects anything violating the invariants.
    static ParamSchedule desk(std::vector<BigInt> s, std::vector<BigInt> inner,
                              std::vector<BigInt> outer) {
        ParamSchedule sched;
        sched.kind_ = ScheduleKind::desk;
        if (s.size() < 2) throw std::invalid_argument("ParamSchedule::desk: need at least s_0, s_1");
        if (inner.size() + 1 != s.size() || outer.size() + 1 != s.size())
            throw std::invalid_argument("ParamSchedule::desk: radii lists must have s.size()-1 entries");
        sched.s_ = std::move(s);
        sched.inner_.resize(sched.s_.size());
        sched.outer_.resize(sched.s_.size());
        for (std::size_t k = 1; k < sched.s_.size(); ++k) {
            sched.inner_[k] = std::move(inner[k - 1]);
            sched.outer_[k] = std::move(outer[k - 1]);
        }
        sched.validate();
        return sched;
    }

    ScheduleKind kind() const { return kind_; }
    std::uint32_t k_max() const { return static_cast<std::uint32_t>(s_.size() - 1); }

    /// Boundary s_k, k in [0, k_max].
    const BigInt& boundary(std::uint32_t k) const {
        check_k(k, 0);
        return s_[k];
    }
    const BigInt& inner_radius(std::uint32_t k) const {
        check_k(k, 1);
        return inner_[k];
    }
    const BigInt& outer_radius(std::uint32_t k) const {
        check_k(k, 1);
        return outer_[k];
    }

    /// Boundary narrowed to a simulable step count.
    std::uint64_t boundary_u64(std::uint32_t k) const {
        const BigInt& b = boundary(k);
        if (b > std::numeric_limits<std::uint64_t>::max())
            throw ResourceError("schedule boundary exceeds 64-bit step range");
        return b.convert_to<std::uint64_t>();
    }

    /// Segment [s_{j-1}, s_j) as a pair of boundaries, j in [1, k_max].
    std::pair<BigInt, BigInt> segment_range(std::uint32_t j) const {
        check_k(j, 1);
        return {s_[j - 1], s_[j]};
    }

    /// Number of steps in segment j, narrowed for simulation.
    std::uint64_t segment_length_u64(std::uint32_t j) const {
        auto [lo, hi] = segment_range(j);
        BigInt len = hi - lo;
        if (len > std::numeric_limits<std::uint64_t>::max())
            throw ResourceError("segment length exceeds 64-bit step range");
        return len.convert_to<std::uint64_t>();
    }

    /// The j with s_{j-1} <= step < s_j.
    std::uint32_t segment_of(const BigInt& step) const {
        if (step < s_.front() || step >= s_.back())
            throw std::out_of_range("segment_of: step outside [s_0, s_kmax)");
        // first boundary strictly greater than step
        auto it = std::upper_bound(s_.begin(), s_.end(), step);
        return static_cast<std::uint32_t>(it - s_.begin());
    }

    /// Exact membership test for annulus k, comparing squared radii as integers.
    bool annulus_contains(std::uint32_t k, Point p) const {
        check_k(k, 1);
        const BigInt r2 = BigInt(p.norm2());
        return r2 >= inner_[k] * inner_[k] && r2 <= outer_[k] * outer_[k];
    }

    friend bool operator==(const ParamSchedule& a, const ParamSchedule& b) {
        return a.s_ == b.s_ && a.inner_ == b.inner_ && a.outer_ == b.outer_;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = kind_ == ScheduleKind::paper ? "paper" : "desk";
        auto decimals = [](const std::vector<BigInt>& v, std::size_t from) {
            std::vector<std::string> out;
            for (std::size_t i = from; i < v.size(); ++i) out.push_back(v[i].str());
            return out;
        };
        j["s"] = decimals(s_, 0);
        j["inner"] = decimals(inner_, 1);
        j["outer"] = decimals(outer_, 1);
        return j;
    }

    static ParamSchedule from_json(const nlohmann::json& j) {
        auto parse = [](const nlohmann::json& arr) {
            std::vector<BigInt> out;
            for (const auto& e : arr) out.emplace_back(e.get<std::string>());
            return out;
        };
        ParamSchedule sched =
            desk(parse(j.at("s")), parse(j.at("inner")), parse(j.at("outer")));
        if (j.value("kind", "desk") == std::string("paper")) sched.kind_ = ScheduleKind::paper;
        return sched;
    }

  private:
    ParamSchedule() = default;

    void check_k(std::uint32_t k, std::uint32_t lo) const {
        if (k < lo || k >= s_.size())
            throw std::out_of_range("schedule index k outside valid range");
    }

    void validate() const {
        if (s_[0] < 1) throw std::invalid_argument("schedule: s_0 must be >= 1");
        for (std::size_t k = 1; k < s_.size(); ++k) {
            if (s_[k] <= s_[k - 1])
                throw std::invalid_argument("schedule: boundaries must be strictly increasing");
            if (inner_[k] < 1 || inner_[k] > outer_[k])
                throw std::invalid_argument("schedule: need 1 <= inner_radius <= outer_radius");
        }
    }

    ScheduleKind kind_ = ScheduleKind::desk;
    std::vector<BigInt> s_;      // s_[k], k = 0..k_max
    std::vector<BigInt> inner_;  // inner_[k], k = 1..k_max ([0] unused)
    std::vector<BigInt> outer_;
};

/// Built-in desk schedules used throughout the tests and CLI examples.
/// "tiny": every segment is a single step, super-segment 1 ends at s_4 = 5.
/// "small": three-step segments through k = 8, super-segment 2 ends at s_8 = 22.
inline ParamSchedule demo_schedule(const std::string& name) {
    auto big = [](std::initializer_list<int> xs) {
        std::vector<BigInt> v;
        for (int x : xs) v.emplace_back(x);
        return v;
    };
    if (name == "tiny")
        return ParamSchedule::desk(big({1, 2, 3, 4, 5}), big({1, 1, 1, 1}), big({4, 6, 8, 10}));
    if (name == "small")
        return ParamSchedule::desk(big({1, 2, 5, 8, 10, 13, 16, 19, 22}),
                                   big({1, 1, 1, 1, 1, 1, 1, 1}),
                                   big({4, 8, 12, 16, 20, 24, 28, 32}));
    throw std::invalid_argument("demo_schedule: unknown name '" + name + "'");
}

/// Exact product over segment indices j in [2^k, 2^{k+1}) of (1 - 2/j).
/// Telescopes to ((2^k - 1)(2^k - 2)) / ((2^{k+1} - 1)(2^{k+1} - 2)); the
/// product form is computed here and the closed form is checked in tests.
inline BigRat beta(std::uint32_t k) {
    if (k < 1) throw std::invalid_argument("beta: k must be >= 1");
    if (k > 40) throw ResourceError("beta: k too large to enumerate the product");
    const std::uint64_t lo = std::uint64_t(1) << k;
    const std::uint64_t hi = std::uint64_t(1) << (k + 1);
    BigRat prod = 1;
    for (std::uint64_t j = lo; j < hi; ++j) prod *= BigRat(j - 2, j);
    return prod;
}

/// Smallest integer strictly greater than |log2 t| + 1, for t in (0,1).
inline int K_of(double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("K_of: t must lie in (0,1)");
    const double x = std::abs(std::log2(t)) + 1.0;
    return static_cast<int>(std::floor(x)) + 1;
}

/// Smallest integer strictly greater than log2(|log2 t| + 1) + 1, for t in (0,1).
inline int K_prime_of(double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("K_prime_of: t must lie in (0,1)");
    const double x = std::log2(std::abs(std::log2(t)) + 1.0) + 1.0;
    return static_cast<int>(std::floor(x)) + 1;
}

}  // namespace dynwalk
