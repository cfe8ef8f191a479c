// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
//
// Exact lattice ground truth: the probability that simple random walk from x
// reaches a target set before leaving the open ball of radius n. Solved as a
// discrete Dirichlet problem (value 1 on targets, 0 outside the ball,
// harmonic elsewhere) by SOR relaxation with a fixed lexicographic sweep
// order, so results are tolerance-deterministic.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dynwalk/errors.hpp"
#include "dynwalk/lattice.hpp"

namespace dynwalk {

class HitProbField {
  public:
    HitProbField(int radius, std::vector<Point> targets)
        : n_(radius), dim_(2 * radius + 1), targets_(std::move(targets)) {
        v_.assign(static_cast<std::size_t>(dim_) * dim_, 0.0);
        kind_.assign(v_.size(), kExterior);
        const std::int64_t r2 = std::int64_t(n_) * n_;
        for (int y = -n_; y <= n_; ++y)
            for (int x = -n_; x <= n_; ++x)
                if (std::int64_t(x) * x + std::int64_t(y) * y < r2) kind_[idx({x, y})] = kInterior;
        for (const Point& p : targets_) {
            if (p.norm2() >= r2)
                throw std::invalid_argument("HitProbField: target outside the open ball");
            kind_[idx(p)] = kTarget;
            v_[idx(p)] = 1.0;
        }
    }

    int radius() const { return n_; }
    const std::vector<Point>& targets() const { return targets_; }

    /// Solved value at p; 0 for any point at or beyond the exit radius.
    double value(Point p) const {
        if (p.x < -n_ || p.x > n_ || p.y < -n_ || p.y > n_) return 0.0;
        return v_[idx(p)];
    }

    bool is_interior(Point p) const {
        if (p.x < -n_ || p.x > n_ || p.y < -n_ || p.y > n_) return false;
        return kind_[idx(p)] != kExterior;
    }

    double max_residual() const { return residual_; }
    std::uint64_t sweeps() const { return sweeps_; }

    /// Visits every non-target interior point with its value.
    template <class F>
    void for_each_interior(F&& f) const {
        for (int y = -n_; y <= n_; ++y)
            for (int x = -n_; x <= n_; ++x) {
                const Point p{x, y};
                if (kind_[idx(p)] == kInterior) f(p, v_[idx(p)]);
            }
    }

    /// Max harmonic defect |v - mean(4 neighbours)| over interior non-targets.
    double compute_residual() const {
        double worst = 0.0;
        const int N = dim_;
        for (int y = -n_; y <= n_; ++y) {
            for (int x = -n_; x <= n_; ++x) {
                const std::size_t i = idx({x, y});
                if (kind_[i] != kInterior) continue;
                const double mean = 0.25 * (v_[i - 1] + v_[i + 1] + v_[i - N] + v_[i + N]);
                worst = std::max(worst, std::abs(v_[i] - mean));
            }
        }
        return worst;
    }

    friend HitProbField solve_hit_before_exit(int, std::vector<Point>, double, std::uint64_t);

  private:
    static constexpr std::uint8_t kExterior = 0, kTarget = 1, kInterior = 2;

    std::size_t idx(Point p) const {
        return static_cast<std::size_t>(p.y + n_) * dim_ + static_cast<std::size_t>(p.x + n_);
    }

    /// Largest x with x^2 + y^2 < n^2, or -1 when the row misses the ball.
    int row_xmax(int y) const {
        const std::int64_t rem = std::int64_t(n_) * n_ - std::int64_t(y) * y - 1;
        if (rem < 0) return -1;
        int m = static_cast<int>(std::sqrt(static_cast<double>(rem)));
        while (std::int64_t(m + 1) * (m + 1) <= rem) ++m;
        while (std::int64_t(m) * m > rem) --m;
        return m;
    }

    void relax(double tol, std::uint64_t max_sweeps) {
        if (targets_.size() == 1 && targets_[0] == kOrigin)
            relax_octant(tol, max_sweeps);
        else
            relax_full(tol, max_sweeps);
        for (double& x : v_) x = std::min(1.0, std::max(0.0, x));
        residual_ = compute_residual();
        if (residual_ > tol)
            throw ConvergenceError("solve_hit_before_exit: full-grid residual above tolerance");
    }

    void relax_full(double tol, std::uint64_t max_sweeps) {
        const int N = dim_;
        const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / dim_));
        sweeps_ = 0;
        while (true) {
            for (int y = -n_; y <= n_; ++y) {
                const int m = row_xmax(y);
                if (m < 0) continue;
                std::size_t i = idx({-m, y});
                for (int x = -m; x <= m; ++x, ++i) {
                    if (kind_[i] == kInterior) {
                        const double mean = 0.25 * (v_[i - 1] + v_[i + 1] + v_[i - N] + v_[i + N]);
                        v_[i] += omega * (mean - v_[i]);
                    }
                }
            }
            ++sweeps_;
            if (sweeps_ % 16 == 0 || sweeps_ >= max_sweeps) {
                if (compute_residual() <= tol) break;
                if (sweeps_ >= max_sweeps)
                    throw ConvergenceError("solve_hit_before_exit: residual above tolerance at sweep cap");
            }
        }
    }

    /// Origin-target fields are invariant under the dihedral symmetries, so
    /// it is enough to relax the octant 0 <= y <= x. Neighbours that leave
    /// the octant fold back: at the diagonal (x = y) both the west and north
    /// neighbours map onto (y, y-1) and (x+1, y); on the axis (y = 0) the
    /// south neighbour maps onto (x, 1). The solution is unfolded afterwards
    /// and the residual re-verified on the full grid.
    void relax_octant(double tol, std::uint64_t max_sweeps) {
        const int rows = n_ + 1;
        auto width = [&](int y) { return n_ + 2 - y; };
        std::vector<std::size_t> offset(rows + 1, 0);
        for (int y = 0; y < rows; ++y) offset[y + 1] = offset[y] + width(y);
        std::vector<double> w(offset[rows], 0.0);
        auto at = [&](int x, int y) -> double& { return w[offset[y] + (x - y)]; };
        at(0, 0) = 1.0;

        std::vector<int> xmax(rows, -1);
        for (int y = 0; y < rows; ++y) xmax[y] = row_xmax(y);

        const double omega = 2.0 / (1.0 + std::sin(std::numbers::pi / dim_));
        auto cell_mean = [&](int x, int y) {
            if (y == 0) return 0.25 * (at(x - 1, 0) + at(x + 1, 0) + 2.0 * at(x, 1));
            if (x == y) return 0.5 * (at(y, y - 1) + at(y + 1, y));
            return 0.25 * (at(x - 1, y) + at(x + 1, y) + at(x, y + 1) + at(x, y - 1));
        };
        auto octant_residual = [&]() {
            double worst = 0.0;
            for (int y = 0; y < rows; ++y) {
                for (int x = std::max(y, 1); x <= xmax[y]; ++x)
                    worst = std::max(worst, std::abs(at(x, y) - cell_mean(x, y)));
            }
            return worst;
        };

        sweeps_ = 0;
        while (true) {
            for (int y = 0; y < rows; ++y) {
                const int m = xmax[y];
                for (int x = std::max(y, 1); x <= m; ++x) {
                    double& cell = at(x, y);
                    cell += omega * (cell_mean(x, y) - cell);
                }
            }
            ++sweeps_;
            if (sweeps_ % 16 == 0 || sweeps_ >= max_sweeps) {
                if (octant_residual() <= tol) break;
                if (sweeps_ >= max_sweeps)
                    throw ConvergenceError("solve_hit_before_exit: residual above tolerance at sweep cap");
            }
        }

        for (int y = -n_; y <= n_; ++y) {
            for (int x = -n_; x <= n_; ++x) {
                const std::size_t i = idx({x, y});
                if (kind_[i] == kExterior) continue;
                const int ax = std::abs(x), ay = std::abs(y);
                v_[i] = at(std::max(ax, ay), std::min(ax, ay));
            }
        }
    }

    int n_;
    int dim_;
    std::vector<Point> targets_;
    std::vector<double> v_;
    std::vector<std::uint8_t> kind_;
    double residual_ = 0.0;
    std::uint64_t sweeps_ = 0;
};

/// Solve the hitting-before-exit problem on the open ball of radius n.
inline HitProbField solve_hit_before_exit(int n, std::vector<Point> targets = {kOrigin},
                                          double tol = 1e-12,
                                          std::uint64_t max_sweeps = 1'000'000) {
    if (n < 2 || n > 1024) throw ResourceError("solve_hit_before_exit: n outside [2, 1024]");
    HitProbField field(n, std::move(targets));
    field.relax(tol, max_sweeps);
    return field;
}

/// Probability of leaving the radius-n ball before returning to the origin,
/// started from a neighbour of the origin.
inline double escape_probability(const HitProbField& field) {
    return 1.0 - field.value({1, 0});
}
inline double escape_probability(int n) { return escape_probability(solve_hit_before_exit(n)); }

/// Smallest constant C such that
///   (log2 n - log2|x| - C) / log2 n  <=  value(x)  <=  (log2 n - log2|x| + C) / log2 n
/// for every non-target interior x, together with the point attaining it.
struct LogBandReport {
    int radius = 0;
    double min_constant = 0.0;
    Point witness{};

    bool within(double candidate) const { return min_constant <= candidate; }
};

inline LogBandReport log_band_report(const HitProbField& field) {
    LogBandReport rep;
    rep.radius = field.radius();
    const double logn = std::log2(static_cast<double>(field.radius()));
    field.for_each_interior([&](Point p, double v) {
        if (p == kOrigin) return;
        const double logx = 0.5 * std::log2(static_cast<double>(p.norm2()));
        const double c = std::abs(v * logn - (logn - logx));
        if (c > rep.min_constant) {
            rep.min_constant = c;
            rep.witness = p;
        }
    });
    return rep;
}

}  // namespace dynwalk
