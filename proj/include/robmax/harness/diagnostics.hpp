#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "robmax/core.hpp"

namespace robmax::harness {

struct VarianceDecay {
    std::vector<double> sorted_sigmas;  ///< non-increasing
    double beta_hat = 0.0;              ///< LS slope of -log sigma_(j) on log j
};

[[nodiscard]] inline VarianceDecay variance_decay_diagnostic(const MomEstimates& est) {
    const std::size_t p = est.p();
    if (p < 2) throw std::invalid_argument("variance_decay_diagnostic: need p >= 2");
    VarianceDecay out;
    out.sorted_sigmas.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        if (!(est.variances[j] > 0.0)) throw DegenerateVariance(j);
        out.sorted_sigmas[j] = std::sqrt(est.variances[j]);
    }
    std::sort(out.sorted_sigmas.begin(), out.sorted_sigmas.end(), std::greater<>());
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        sx += std::log(static_cast<double>(j + 1));
        sy += -std::log(out.sorted_sigmas[j]);
    }
    const double mx = sx / static_cast<double>(p);
    const double my = sy / static_cast<double>(p);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        const double dx = std::log(static_cast<double>(j + 1)) - mx;
        sxy += dx * (-std::log(out.sorted_sigmas[j]) - my);
        sxx += dx * dx;
    }
    out.beta_hat = sxy / sxx;
    return out;
}

/// sup_x |F_a(x) - F_b(x)| for the two empirical CDFs.
[[nodiscard]] inline double kolmogorov_distance(std::span<const double> samples_a,
                                                std::span<const double> samples_b) {
    if (samples_a.empty() || samples_b.empty()) throw std::invalid_argument("kolmogorov_distance: empty input");
    std::vector<double> a(samples_a.begin(), samples_a.end());
    std::vector<double> b(samples_b.begin(), samples_b.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, k = 0;
    double d = 0.0;
    while (i < a.size() || k < b.size()) {
        const double x = k == b.size() || (i < a.size() && a[i] <= b[k]) ? a[i] : b[k];
        while (i < a.size() && a[i] <= x) ++i;
        while (k < b.size() && b[k] <= x) ++k;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(k) / nb));
    }
    return d;
}

}  // namespace robmax::harness
