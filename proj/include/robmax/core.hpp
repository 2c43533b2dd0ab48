#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "robmax/matrix.hpp"

namespace robmax {

/// Raised when a coordinate's median-of-means variance is exactly zero.
class DegenerateVariance : public std::runtime_error {
public:
    explicit DegenerateVariance(std::size_t coordinate)
        : std::runtime_error("degenerate (zero) variance estimate at coordinate " +
                             std::to_string(coordinate)),
          coordinate_(coordinate) {}
    [[nodiscard]] std::size_t coordinate() const noexcept { return coordinate_; }

private:
    std::size_t coordinate_;
};

/// Observation matrix with a hold-out split. The first n rows are the main
/// sample; the last m_n rows are the hold-out used for the MOM estimates.
class DataMatrix {
public:
    DataMatrix(Matrix values, std::size_t n, std::size_t m_n)
        : values_(std::move(values)), n_(n), m_n_(m_n) {
        if (n_ < 2) throw std::invalid_argument("DataMatrix: n must be >= 2");
        if (m_n_ < 2 || m_n_ % 2 != 0)
            throw std::invalid_argument("DataMatrix: m_n must be even and >= 2");
        if (values_.rows() != n_ + m_n_)
            throw std::invalid_argument("DataMatrix: row count must equal n + m_n");
        if (values_.cols() < 1) throw std::invalid_argument("DataMatrix: need at least one column");
        for (double v : values_.data())
            if (!std::isfinite(v)) throw std::invalid_argument("DataMatrix: non-finite entry");
    }

    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t m_n() const noexcept { return m_n_; }
    [[nodiscard]] std::size_t p() const noexcept { return values_.cols(); }

    [[nodiscard]] std::vector<double> main_column(std::size_t j) const { return values_.column(j, 0, n_); }
    [[nodiscard]] std::vector<double> holdout_column(std::size_t j) const {
        return values_.column(j, n_, m_n_);
    }

private:
    Matrix values_;
    std::size_t n_;
    std::size_t m_n_;
};

/// Partition of the hold-out into b_n contiguous blocks of even length ell_n.
class BlockScheme {
public:
    BlockScheme(std::size_t m_n, std::size_t ell_n) : ell_n_(ell_n) {
        if (ell_n < 2 || ell_n % 2 != 0) throw std::invalid_argument("ell_n must be even and >= 2");
        if (m_n < ell_n || m_n % ell_n != 0)
            throw std::invalid_argument("ell_n must divide m_n");
        b_n_ = m_n / ell_n;
    }

    [[nodiscard]] std::size_t ell_n() const noexcept { return ell_n_; }
    [[nodiscard]] std::size_t b_n() const noexcept { return b_n_; }
    [[nodiscard]] std::size_t m_n() const noexcept { return ell_n_ * b_n_; }

private:
    std::size_t ell_n_;
    std::size_t b_n_ = 0;
};

/// sgn(x) * min(|x|, t)
[[nodiscard]] constexpr double truncate(double x, double t) noexcept {
    return x > t ? t : (x < -t ? -t : x);
}

/// Median; even sizes average the two middle order statistics.
[[nodiscard]] inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sequence");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

namespace detail {
inline void check_holdout(std::span<const double> holdout, const BlockScheme& scheme) {
    if (holdout.size() != scheme.m_n())
        throw std::invalid_argument("hold-out length does not match block scheme");
}
}  // namespace detail

[[nodiscard]] inline std::vector<double> block_means(std::span<const double> holdout,
                                                     const BlockScheme& scheme) {
    detail::check_holdout(holdout, scheme);
    const std::size_t ell = scheme.ell_n();
    std::vector<double> means(scheme.b_n());
    for (std::size_t l = 0; l < scheme.b_n(); ++l) {
        double s = 0.0;
        for (std::size_t k = 0; k < ell; ++k) s += holdout[l * ell + k];
        means[l] = s / static_cast<double>(ell);
    }
    return means;
}

[[nodiscard]] inline double mom_mean(std::span<const double> holdout, const BlockScheme& scheme) {
    return median(block_means(holdout, scheme));
}

/// Median over blocks of the mean of 0.5*(X_i - X_{i+ell/2})^2 over the
/// ell/2 within-block pairs at lag ell/2.
[[nodiscard]] inline double mom_variance(std::span<const double> holdout, const BlockScheme& scheme) {
    detail::check_holdout(holdout, scheme);
    const std::size_t ell = scheme.ell_n();
    const std::size_t half = ell / 2;
    std::vector<double> block_vars(scheme.b_n());
    for (std::size_t l = 0; l < scheme.b_n(); ++l) {
        const std::size_t start = l * ell;
        double s = 0.0;
        for (std::size_t k = 0; k < half; ++k) {
            const double d = holdout[start + k] - holdout[start + k + half];
            s += 0.5 * d * d;
        }
        block_vars[l] = s / static_cast<double>(half);
    }
    return median(std::move(block_vars));
}

/// Per-coordinate hold-out estimates and the quantities derived from them.
struct MomEstimates {
    std::vector<double> means;         ///< MOM means
    std::vector<double> variances;     ///< MOM variances, all > 0
    std::vector<double> trunc_levels;  ///< sqrt(n) * sigma_j
    std::vector<double> weights;       ///< 1 / (sigma_j^tau * sqrt(n))
    double tau = 0.9;
    std::size_t n = 0;

    [[nodiscard]] std::size_t p() const noexcept { return means.size(); }
    [[nodiscard]] double sigma(std::size_t j) const { return std::sqrt(variances[j]); }
};

[[nodiscard]] inline MomEstimates fit_estimates(const DataMatrix& data, const BlockScheme& scheme,
                                                double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
    if (scheme.m_n() != data.m_n()) throw std::invalid_argument("block scheme does not match m_n");
    const std::size_t p = data.p();
    const double root_n = std::sqrt(static_cast<double>(data.n()));
    MomEstimates est;
    est.tau = tau;
    est.n = data.n();
    est.means.resize(p);
    est.variances.resize(p);
    est.trunc_levels.resize(p);
    est.weights.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto h = data.holdout_column(j);
        est.means[j] = mom_mean(h, scheme);
        est.variances[j] = mom_variance(h, scheme);
        if (est.variances[j] <= 0.0) throw DegenerateVariance(j);
        const double sigma = std::sqrt(est.variances[j]);
        est.trunc_levels[j] = root_n * sigma;
        est.weights[j] = 1.0 / (std::pow(sigma, tau) * root_n);
    }
    return est;
}

/// g(x) = (1 / (sqrt(n) sigma^tau)) * sum_i truncate(X_i - x, t_hat), where
/// n is the length of main_column.
[[nodiscard]] inline double coordinate_stat(std::span<const double> main_column, double center,
                                            double t_hat, double sigma_hat, double tau) {
    if (!(sigma_hat > 0.0)) throw std::invalid_argument("coordinate_stat: sigma_hat must be positive");
    if (!(t_hat >= 0.0)) throw std::invalid_argument("coordinate_stat: t_hat must be nonnegative");
    double s = 0.0;
    for (double x : main_column) s += truncate(x - center, t_hat);
    return s / (std::pow(sigma_hat, tau) * std::sqrt(static_cast<double>(main_column.size())));
}

struct MaxMin {
    double max = 0.0;
    double min = 0.0;
};

/// Per-coordinate statistics g_j(mu_j) on the main rows.
[[nodiscard]] inline std::vector<double> coordinate_stats(const DataMatrix& data,
                                                          std::span<const double> centers,
                                                          const MomEstimates& est) {
    if (centers.size() != data.p() || est.p() != data.p())
        throw std::invalid_argument("coordinate_stats: dimension mismatch");
    const std::size_t n = data.n();
    const Matrix& x = data.values();
    std::vector<double> sums(data.p(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = x.row(i);
        for (std::size_t j = 0; j < sums.size(); ++j)
            sums[j] += truncate(r[j] - centers[j], est.trunc_levels[j]);
    }
    for (std::size_t j = 0; j < sums.size(); ++j) sums[j] *= est.weights[j];
    return sums;
}

[[nodiscard]] inline MaxMin max_min_statistic(const DataMatrix& data, std::span<const double> mu,
                                              const MomEstimates& est) {
    const auto g = coordinate_stats(data, mu, est);
    const auto [lo, hi] = std::minmax_element(g.begin(), g.end());
    return {*hi, *lo};
}

}  // namespace robmax
