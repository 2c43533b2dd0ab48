#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "robmax/bootstrap.hpp"
#include "robmax/core.hpp"

namespace robmax {

/// Closed interval with possibly infinite endpoints, or empty.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = false;

    [[nodiscard]] static Interval make_empty() { return {0.0, 0.0, true}; }
    [[nodiscard]] bool contains(double x) const noexcept { return !empty && lo <= x && x <= hi; }
    [[nodiscard]] bool bounded() const noexcept { return !empty && std::isfinite(lo) && std::isfinite(hi); }
    [[nodiscard]] double width() const noexcept {
        return empty ? 0.0 : hi - lo;
    }
};

/// g(x) = scale * sum_i truncate(X_i - x, t) for one coordinate, evaluated in
/// O(log n) from sorted values and prefix sums.
class TruncatedSum {
public:
    TruncatedSum(std::span<const double> values, double t_hat, double sigma_hat, double tau)
        : sorted_(values.begin(), values.end()), t_(t_hat) {
        if (values.empty()) throw std::invalid_argument("TruncatedSum: empty column");
        if (!(sigma_hat > 0.0)) throw std::invalid_argument("TruncatedSum: sigma_hat must be positive");
        if (!(t_hat >= 0.0)) throw std::invalid_argument("TruncatedSum: t_hat must be nonnegative");
        std::sort(sorted_.begin(), sorted_.end());
        prefix_.resize(sorted_.size() + 1, 0.0);
        for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
        scale_ = 1.0 / (std::pow(sigma_hat, tau) * std::sqrt(static_cast<double>(sorted_.size())));
        breakpoints_.reserve(2 * sorted_.size());
        for (double v : sorted_) {
            breakpoints_.push_back(v - t_);
            breakpoints_.push_back(v + t_);
        }
        std::sort(breakpoints_.begin(), breakpoints_.end());
    }

    /// Value where every summand is clamped at +t (x below all breakpoints).
    [[nodiscard]] double sup() const noexcept { return scale_ * t_ * static_cast<double>(sorted_.size()); }

    [[nodiscard]] double operator()(double x) const noexcept {
        // Values below x - t contribute -t, above x + t contribute +t.
        const auto first_mid = std::upper_bound(sorted_.begin(), sorted_.end(), x - t_);
        const auto first_hi = std::lower_bound(first_mid, sorted_.end(), x + t_);
        const auto a = static_cast<std::size_t>(first_mid - sorted_.begin());
        const auto b = static_cast<std::size_t>(first_hi - sorted_.begin());
        const double n_low = static_cast<double>(a);
        const double n_high = static_cast<double>(sorted_.size() - b);
        const double mid = (prefix_[b] - prefix_[a]) - x * static_cast<double>(b - a);
        return scale_ * (t_ * (n_high - n_low) + mid);
    }

    /// {x : q_minus <= g(x) <= q_plus}, the maximal closed solution set.
    [[nodiscard]] Interval invert(double q_minus, double q_plus) const {
        if (q_minus > q_plus) throw std::invalid_argument("invert_interval: q_minus > q_plus");
        const double top = sup();
        if (q_plus < -top || q_minus > top) return Interval::make_empty();
        Interval out;
        out.lo = q_plus >= top ? -std::numeric_limits<double>::infinity() : leftmost_at_most(q_plus);
        out.hi = q_minus <= -top ? std::numeric_limits<double>::infinity() : rightmost_at_least(q_minus);
        if (out.lo > out.hi) out.hi = out.lo;  // only reachable through rounding at a single point
        return out;
    }

private:
    // Smallest x with g(x) <= q, given -sup <= q < sup.
    [[nodiscard]] double leftmost_at_most(double q) const {
        const auto& bp = breakpoints_;
        // First breakpoint with g <= q; g(bp.front()) == sup > q.
        std::size_t lo = 0, hi = bp.size() - 1;
        if ((*this)(bp[hi]) > q) return bp[hi];  // rounding guard; g(bp.back()) == -sup
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if ((*this)(bp[mid]) <= q) hi = mid; else lo = mid;
        }
        return solve_segment(bp[lo], bp[hi], q);
    }

    // Largest x with g(x) >= q, given -sup < q <= sup.
    [[nodiscard]] double rightmost_at_least(double q) const {
        const auto& bp = breakpoints_;
        std::size_t lo = 0, hi = bp.size() - 1;
        if ((*this)(bp[lo]) < q) return bp[lo];
        while (hi - lo > 1) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if ((*this)(bp[mid]) >= q) lo = mid; else hi = mid;
        }
        return solve_segment(bp[lo], bp[hi], q);
    }

    // Linear solve of g(x) = q on [a, b] where g is affine.
    [[nodiscard]] double solve_segment(double a, double b, double q) const {
        const double ga = (*this)(a);
        const double gb = (*this)(b);
        if (ga == gb) return q == gb ? (q == ga ? a : b) : a;
        if (q >= ga) return a;
        if (q <= gb) return b;
        return a + (ga - q) / (ga - gb) * (b - a);
    }

    std::vector<double> sorted_;
    std::vector<double> prefix_;
    std::vector<double> breakpoints_;
    double t_;
    double scale_ = 1.0;
};

[[nodiscard]] inline Interval invert_interval(std::span<const double> main_column, double t_hat,
                                              double sigma_hat, double tau, double q_minus, double q_plus) {
    return TruncatedSum(main_column, t_hat, sigma_hat, tau).invert(q_minus, q_plus);
}

struct ConfidenceBand {
    std::vector<Interval> intervals;
    double alpha = 0.05;
    double q_minus = 0.0;
    double q_plus = 0.0;
};

struct QuantilePair {
    double q_minus;
    double q_plus;
};

[[nodiscard]] inline QuantilePair band_quantiles(const BootstrapDistribution& boot, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    return {empirical_quantile(boot.sorted_min, alpha / 2.0),
            empirical_quantile(boot.sorted_max, 1.0 - alpha / 2.0)};
}

[[nodiscard]] inline ConfidenceBand simultaneous_cis(const DataMatrix& data, const MomEstimates& est,
                                                     const BootstrapDistribution& boot, double alpha) {
    if (est.p() != data.p()) throw std::invalid_argument("simultaneous_cis: dimension mismatch");
    const auto q = band_quantiles(boot, alpha);
    ConfidenceBand band;
    band.alpha = alpha;
    band.q_minus = q.q_minus;
    band.q_plus = q.q_plus;
    band.intervals.reserve(data.p());
    for (std::size_t j = 0; j < data.p(); ++j) {
        const auto col = data.main_column(j);
        band.intervals.push_back(
            invert_interval(col, est.trunc_levels[j], est.sigma(j), est.tau, q.q_minus, q.q_plus));
    }
    return band;
}

struct TestOutcome {
    bool reject = false;
    double p_value = 1.0;
    double t_max = 0.0;
    double t_min = 0.0;
    std::vector<std::size_t> offenders;

    friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

/// Equal-tailed add-one bootstrap p-value for the observed extremes.
[[nodiscard]] inline double p_value(double t_max, double t_min, const BootstrapDistribution& boot) {
    if (boot.sorted_max.empty() || boot.sorted_min.empty())
        throw std::invalid_argument("p_value: empty bootstrap distribution");
    const auto& mx = boot.sorted_max;
    const auto& mn = boot.sorted_min;
    const auto above = static_cast<double>(mx.end() - std::lower_bound(mx.begin(), mx.end(), t_max));
    const auto below = static_cast<double>(std::upper_bound(mn.begin(), mn.end(), t_min) - mn.begin());
    const double p_plus = (1.0 + above) / (static_cast<double>(mx.size()) + 1.0);
    const double p_minus = (1.0 + below) / (static_cast<double>(mn.size()) + 1.0);
    return std::min(1.0, 2.0 * std::min(p_plus, p_minus));
}

/// Rejects when some interval in `coords` excludes zero.
[[nodiscard]] inline TestOutcome zero_exclusion_test(const DataMatrix& data, const MomEstimates& est,
                                                     const BootstrapDistribution& boot, double alpha,
                                                     std::span<const std::size_t> coords) {
    if (coords.empty()) throw std::invalid_argument("zero_exclusion_test: empty coordinate set");
    const auto q = band_quantiles(boot, alpha);
    const std::vector<double> zeros(data.p(), 0.0);
    const auto g = coordinate_stats(data, zeros, est);
    TestOutcome out;
    out.t_max = -std::numeric_limits<double>::infinity();
    out.t_min = std::numeric_limits<double>::infinity();
    for (std::size_t j : coords) {
        if (j >= data.p()) throw std::invalid_argument("zero_exclusion_test: coordinate out of range");
        out.t_max = std::max(out.t_max, g[j]);
        out.t_min = std::min(out.t_min, g[j]);
        if (g[j] > q.q_plus || g[j] < q.q_minus) out.offenders.push_back(j);
    }
    out.reject = !out.offenders.empty();
    out.p_value = p_value(out.t_max, out.t_min, boot);
    return out;
}

}  // namespace robmax
