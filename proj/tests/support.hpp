#pragma once

// Test-only helpers: input generators independent of the library's RNG.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "robmax/core.hpp"
#include "robmax/matrix.hpp"

namespace robmax::testing {

inline std::vector<double> random_vector(std::mt19937_64& g, std::size_t n, double lo = -5.0, double hi = 5.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = u(g);
    return v;
}

/// Student-t(3) entries: heavy-tailed but finite.
inline Matrix random_matrix(std::mt19937_64& g, std::size_t rows, std::size_t cols) {
    std::student_t_distribution<double> t(3.0);
    Matrix m(rows, cols);
    for (double& x : m.data()) x = t(g);
    return m;
}

inline DataMatrix random_data(std::mt19937_64& g, std::size_t n, std::size_t m_n, std::size_t p) {
    return DataMatrix(random_matrix(g, n + m_n, p), n, m_n);
}

/// Hand-rolled estimates for fixture tests.
inline MomEstimates manual_estimates(std::vector<double> means, std::vector<double> sigmas, std::vector<double> t_hat,
                                     double tau, std::size_t n) {
    MomEstimates e;
    e.means = std::move(means);
    e.tau = tau;
    e.n = n;
    e.trunc_levels = std::move(t_hat);
    for (double s : sigmas) {
        e.variances.push_back(s * s);
        e.weights.push_back(1.0 / (std::pow(s, tau) * std::sqrt(static_cast<double>(n))));
    }
    return e;
}

}  // namespace robmax::testing
