#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "robmax/core.hpp"
#include "robmax/parallel.hpp"
#include "robmax/rng.hpp"

namespace robmax {

/// Sorted bootstrap draws of the max statistic and its min counterpart.
struct BootstrapDistribution {
    std::vector<double> sorted_max;
    std::vector<double> sorted_min;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return sorted_max.size(); }
};

/// Centered, truncated summands (Z_ij - mean_i Z_ij), stored coordinate-major
/// and pre-multiplied by the coordinate weight, so a draw is one pass of
/// inner products against the multiplier vector.
class MultiplierKernel {
public:
    MultiplierKernel(const DataMatrix& data, const MomEstimates& est)
        : n_(data.n()), p_(data.p()), centered_(p_ * n_) {
        if (est.p() != p_) throw std::invalid_argument("bootstrap: estimates do not match data");
        if (est.n != n_) throw std::invalid_argument("bootstrap: estimates fitted for different n");
        for (std::size_t j = 0; j < p_; ++j)
            if (!(est.variances[j] > 0.0)) throw DegenerateVariance(j);
        const Matrix& x = data.values();
        for (std::size_t j = 0; j < p_; ++j) {
            double* col = centered_.data() + j * n_;
            double sum = 0.0;
            for (std::size_t i = 0; i < n_; ++i) {
                col[i] = truncate(x(i, j) - est.means[j], est.trunc_levels[j]);
                sum += col[i];
            }
            const double mean = sum / static_cast<double>(n_);
            for (std::size_t i = 0; i < n_; ++i) col[i] = (col[i] - mean) * est.weights[j];
        }
    }

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t p() const noexcept { return p_; }

    [[nodiscard]] MaxMin draw(std::span<const double> multipliers) const {
        if (multipliers.size() != n_) throw std::invalid_argument("bootstrap: need n multipliers");
        MaxMin out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        for (std::size_t j = 0; j < p_; ++j) {
            const double* col = centered_.data() + j * n_;
            double s = 0.0;
            for (std::size_t i = 0; i < n_; ++i) s += multipliers[i] * col[i];
            out.max = std::max(out.max, s);
            out.min = std::min(out.min, s);
        }
        return out;
    }

private:
    std::size_t n_;
    std::size_t p_;
    std::vector<double> centered_;
};

[[nodiscard]] inline MaxMin bootstrap_draw(const DataMatrix& data, const MomEstimates& est,
                                           std::span<const double> multipliers) {
    return MultiplierKernel(data, est).draw(multipliers);
}

/// B draws; draw b uses normals from RngStream::derive(seed, b).
[[nodiscard]] inline BootstrapDistribution run_bootstrap(const DataMatrix& data, const MomEstimates& est,
                                                         std::size_t draws, std::uint64_t seed,
                                                         unsigned threads = 1) {
    if (draws < 1) throw std::invalid_argument("bootstrap: B must be >= 1");
    const MultiplierKernel kernel(data, est);
    const RngStream master(seed);
    BootstrapDistribution dist;
    dist.seed = seed;
    dist.sorted_max.resize(draws);
    dist.sorted_min.resize(draws);
    parallel_for(draws, threads, [&](std::size_t b) {
        std::vector<double> xi(kernel.n());
        RngStream s = master.child(b);
        s.fill_normal(xi);
        const auto mm = kernel.draw(xi);
        dist.sorted_max[b] = mm.max;
        dist.sorted_min[b] = mm.min;
    });
    std::sort(dist.sorted_max.begin(), dist.sorted_max.end());
    std::sort(dist.sorted_min.begin(), dist.sorted_min.end());
    return dist;
}

/// ceil(gamma * B)-th order statistic (1-indexed) of an ascending vector.
[[nodiscard]] inline double empirical_quantile(std::span<const double> sorted, double gamma) {
    if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty input");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("empirical_quantile: gamma must be in (0, 1]");
    const double pos = std::ceil(gamma * static_cast<double>(sorted.size()) - 1e-9);
    const auto k = static_cast<std::size_t>(std::clamp(pos, 1.0, static_cast<double>(sorted.size())));
    return sorted[k - 1];
}

}  // namespace robmax
