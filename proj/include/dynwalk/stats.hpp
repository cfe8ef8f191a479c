// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>

namespace dynwalk {

inline constexpr double kZ95 = 1.959963984540054;

/// A Monte Carlo result with its Wilson 95% interval and, when a reference
/// value is known, the z-score of the estimate against it.
struct McEstimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::optional<double> reference;
    std::optional<double> z;

    double half_width() const { return 0.5 * (ci_high - ci_low); }
};

inline McEstimate make_estimate(std::uint64_t trials, std::uint64_t successes,
                                std::optional<double> reference = {}) {
    if (trials == 0) throw std::invalid_argument("make_estimate: trials must be >= 1");
    if (successes > trials) throw std::invalid_argument("make_estimate: successes > trials");
    McEstimate e;
    e.trials = trials;
    e.successes = successes;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    e.estimate = p;
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The interval always contains the point estimate; clamping also absorbs
    // last-ulp rounding at successes = 0 or trials.
    e.ci_low = std::min(std::max(0.0, centre - half), p);
    e.ci_high = std::max(std::min(1.0, centre + half), p);
    if (reference) {
        e.reference = reference;
        const double r = *reference;
        if (r > 0.0 && r < 1.0) {
            e.z = (p - r) / std::sqrt(r * (1.0 - r) / n);
        } else {
            e.z = (p == r) ? 0.0 : std::numeric_limits<double>::infinity();
        }
    }
    return e;
}

/// |estimate - ref| <= factor * Wilson half-width.
inline bool within_wilson(const McEstimate& e, double ref, double factor = 3.0) {
    return std::abs(e.estimate - ref) <= factor * e.half_width();
}

struct LinearFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double r2 = std::numeric_limits<double>::quiet_NaN();
    std::size_t points = 0;
};

/// Ordinary least squares of y on x.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    LinearFit fit;
    fit.points = x.size();
    if (x.size() < 2) return fit;
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

/// Chi-square statistic of four observed counts against the uniform law.
inline double chi_square_uniform4(const std::array<std::uint64_t, 4>& counts) {
    const double total =
        static_cast<double>(counts[0] + counts[1] + counts[2] + counts[3]);
    const double expected = total / 4.0;
    double stat = 0.0;
    for (std::uint64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return stat;
}

/// Critical value of chi-square with 3 degrees of freedom at significance 1e-3.
inline constexpr double kChi2Crit3Dof1e3 = 16.266;

/// A multiplicative ratio estimate with a delta-method 95% interval.
struct RatioEstimate {
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double ci_low = std::numeric_limits<double>::quiet_NaN();
    double ci_high = std::numeric_limits<double>::quiet_NaN();

    bool defined() const { return std::isfinite(ratio); }
    bool ci_contains(double v) const { return defined() && ci_low <= v && v <= ci_high; }
};

/// Delta-method interval for p_joint / (p_a * p_b) from per-trial indicator
/// counts, where the joint event is the conjunction of the two marginals.
inline RatioEstimate ratio_joint_over_product(std::uint64_t trials, std::uint64_t joint,
                                              std::uint64_t a, std::uint64_t b) {
    RatioEstimate out;
    if (trials == 0 || joint == 0 || a == 0 || b == 0) return out;
    const double n = static_cast<double>(trials);
    const double pj = joint / n, pa = a / n, pb = b / n;
    out.ratio = pj / (pa * pb);
    // Covariances of the estimated proportions; J implies A and B.
    const double vj = pj * (1 - pj), va = pa * (1 - pa), vb = pb * (1 - pb);
    const double cja = pj * (1 - pa), cjb = pj * (1 - pb), cab = pj - pa * pb;
    const double var_log = (vj / (pj * pj) + va / (pa * pa) + vb / (pb * pb) -
                            2 * cja / (pj * pa) - 2 * cjb / (pj * pb) + 2 * cab / (pa * pb)) /
                           n;
    const double sd = std::sqrt(std::max(0.0, var_log));
    out.ci_low = out.ratio * std::exp(-kZ95 * sd);
    out.ci_high = out.ratio * std::exp(kZ95 * sd);
    return out;
}

/// Delta-method interval for p_joint / p_marginal^2, joint implying marginal.
inline RatioEstimate ratio_joint_over_square(std::uint64_t trials, std::uint64_t joint,
                                             std::uint64_t marginal) {
    RatioEstimate out;
    if (trials == 0 || joint == 0 || marginal == 0) return out;
    const double n = static_cast<double>(trials);
    const double pj = joint / n, pm = marginal / n;
    out.ratio = pj / (pm * pm);
    const double vj = pj * (1 - pj), vm = pm * (1 - pm), cjm = pj * (1 - pm);
    const double var_log =
        (vj / (pj * pj) + 4 * vm / (pm * pm) - 4 * cjm / (pj * pm)) / n;
    const double sd = std::sqrt(std::max(0.0, var_log));
    out.ci_low = out.ratio * std::exp(-kZ95 * sd);
    out.ci_high = out.ratio * std::exp(kZ95 * sd);
    return out;
}

}  // namespace dynwalk
