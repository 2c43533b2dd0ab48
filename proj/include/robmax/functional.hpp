#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "robmax/bootstrap.hpp"
#include "robmax/core.hpp"
#include "robmax/inference.hpp"
#include "robmax/rng.hpp"

namespace robmax {

/// A function on [0, 1] observed on an equispaced grid.
///
/// Grids that start at 0 are point samples (GBM paths). Grids that start at
/// h > 0 with spacing h are cell samples: value k summarizes the cell
/// (t_{k-1}, t_k], as for one-minute log returns.
struct CurveSample {
    std::vector<double> grid;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return grid.size(); }
    [[nodiscard]] bool is_cell_sample() const noexcept { return !grid.empty() && grid.front() > 0.0; }

    void validate() const {
        if (grid.empty() || grid.size() != values.size())
            throw std::invalid_argument("CurveSample: grid and values must be nonempty and equally long");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("CurveSample: non-finite value");
        if (grid.size() >= 2) {
            const double h = grid[1] - grid[0];
            if (!(h > 0.0)) throw std::invalid_argument("CurveSample: grid must be increasing");
            for (std::size_t k = 1; k < grid.size(); ++k)
                if (std::abs(grid[k] - grid[k - 1] - h) > 1e-12)
                    throw std::invalid_argument("CurveSample: grid must be equispaced");
        }
    }
};

/// t_k = k / K for k = 0..K.
[[nodiscard]] inline std::vector<double> unit_grid(std::size_t steps) {
    if (steps < 1) throw std::invalid_argument("unit_grid: need at least one step");
    std::vector<double> g(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) g[k] = static_cast<double>(k) / static_cast<double>(steps);
    return g;
}

/// t_k = k / K for k = 1..K.
[[nodiscard]] inline std::vector<double> cell_grid(std::size_t cells) {
    auto g = unit_grid(cells);
    g.erase(g.begin());
    return g;
}

/// phi_1 = 1, phi_j(t) = sqrt(2) cos((j - 1) pi t).
[[nodiscard]] inline double cosine_basis(std::size_t j, double t) {
    if (j < 1) throw std::invalid_argument("cosine_basis: index must be >= 1");
    if (j == 1) return 1.0;
    return std::numbers::sqrt2 * std::cos(static_cast<double>(j - 1) * std::numbers::pi * t);
}

namespace detail {
// Exact integral of phi_j over [a, b].
[[nodiscard]] inline double cosine_basis_integral(std::size_t j, double a, double b) {
    if (j == 1) return b - a;
    const double w = static_cast<double>(j - 1) * std::numbers::pi;
    return std::numbers::sqrt2 * (std::sin(w * b) - std::sin(w * a)) / w;
}
}  // namespace detail

/// Quadrature weights w[c][k] such that the coefficient of phi_{first + c}
/// is sum_k w[c][k] * f(t_k). Point samples use the composite trapezoid
/// rule on the curve's grid; cell samples integrate phi_j exactly over each
/// cell.
class ProjectionTable {
public:
    ProjectionTable(std::span<const double> grid, std::size_t first_index, std::size_t count)
        : grid_(grid.begin(), grid.end()), count_(count), weights_(count * grid.size()) {
        if (grid_.empty()) throw std::invalid_argument("ProjectionTable: empty grid");
        if (first_index < 1) throw std::invalid_argument("ProjectionTable: basis index must be >= 1");
        const std::size_t m = grid_.size();
        const bool cells = grid_.front() > 0.0;
        for (std::size_t c = 0; c < count; ++c) {
            const std::size_t j = first_index + c;
            double* w = weights_.data() + c * m;
            if (cells) {
                double left = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    w[k] = detail::cosine_basis_integral(j, left, grid_[k]);
                    left = grid_[k];
                }
            } else {
                for (std::size_t k = 0; k + 1 < m; ++k) {
                    const double h = 0.5 * (grid_[k + 1] - grid_[k]);
                    w[k] += h * cosine_basis(j, grid_[k]);
                    w[k + 1] += h * cosine_basis(j, grid_[k + 1]);
                }
            }
        }
    }

    [[nodiscard]] bool matches(std::span<const double> grid) const noexcept {
        if (grid.size() != grid_.size()) return false;
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (std::abs(grid[k] - grid_[k]) > 1e-12) return false;
        return true;
    }

    [[nodiscard]] std::size_t count() const noexcept { return count_; }

    void project(std::span<const double> values, std::span<double> out) const {
        const std::size_t m = grid_.size();
        if (values.size() != m) throw std::invalid_argument("ProjectionTable: value count mismatch");
        for (std::size_t c = 0; c < count_; ++c) {
            const double* w = weights_.data() + c * m;
            double s = 0.0;
            for (std::size_t k = 0; k < m; ++k) s += w[k] * values[k];
            out[c] = s;
        }
    }

private:
    std::vector<double> grid_;
    std::size_t count_;
    std::vector<double> weights_;
};

/// Coefficients <curve, phi_j> for j = first_index .. first_index + count - 1.
[[nodiscard]] inline std::vector<double> project_curve(const CurveSample& curve, std::size_t first_index,
                                                       std::size_t count) {
    if (curve.grid.empty() || curve.grid.size() != curve.values.size())
        throw std::invalid_argument("project_curve: malformed curve");
    const ProjectionTable table(curve.grid, first_index, count);
    std::vector<double> coef(count);
    table.project(curve.values, coef);
    return coef;
}

/// Parameters of S(t) = exp((h mu(t) - varsigma0^2 / 2) t + varsigma0 W(t)).
struct GbmSpec {
    double h = 0.0;
    std::vector<double> mu_curve;  ///< mu on unit_grid(steps); length steps + 1
    double varsigma0 = 0.2;
    std::size_t steps = 100;

    void validate() const {
        if (steps < 1) throw std::invalid_argument("GbmSpec: steps must be >= 1");
        if (!(varsigma0 >= 0.0)) throw std::invalid_argument("GbmSpec: varsigma0 must be >= 0");
        if (!(h >= 0.0)) throw std::invalid_argument("GbmSpec: h must be >= 0");
        if (mu_curve.size() != steps + 1) throw std::invalid_argument("GbmSpec: mu_curve must have steps + 1 values");
    }

    [[nodiscard]] static GbmSpec constant_drift(double h, double mu, double varsigma0, std::size_t steps) {
        return {h, std::vector<double>(steps + 1, mu), varsigma0, steps};
    }
};

[[nodiscard]] inline CurveSample sample_gbm(RngStream& stream, const GbmSpec& spec) {
    spec.validate();
    const std::size_t steps = spec.steps;
    CurveSample out{unit_grid(steps), std::vector<double>(steps + 1)};
    const double sd = 1.0 / std::sqrt(static_cast<double>(steps));
    const double v2 = 0.5 * spec.varsigma0 * spec.varsigma0;
    double w = 0.0;
    out.values[0] = 1.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        w += sd * stream.normal();
        const double t = out.grid[k];
        out.values[k] = std::exp((spec.h * spec.mu_curve[k] - v2) * t + spec.varsigma0 * w);
    }
    return out;
}

struct GbmCalibration {
    std::vector<double> mu_curve;
    double varsigma0 = 0.0;
};

/// Fits (mu(t), varsigma0) at h = 1 from cumulative log-return curves that
/// share a grid starting at 0.
[[nodiscard]] inline GbmCalibration calibrate_gbm(std::span<const CurveSample> curves) {
    if (curves.size() < 2) throw std::invalid_argument("calibrate_gbm: need at least 2 curves");
    const auto& grid = curves.front().grid;
    if (grid.size() < 2 || grid.front() != 0.0)
        throw std::invalid_argument("calibrate_gbm: grid must start at 0 and have >= 2 points");
    for (const auto& c : curves) {
        if (c.grid.size() != grid.size() || c.values.size() != grid.size())
            throw std::invalid_argument("calibrate_gbm: grid mismatch");
        for (std::size_t k = 0; k < grid.size(); ++k)
            if (std::abs(c.grid[k] - grid[k]) > 1e-12) throw std::invalid_argument("calibrate_gbm: grid mismatch");
    }
    const std::size_t m = grid.size();
    const double count = static_cast<double>(curves.size());
    std::vector<double> mean(m, 0.0), var(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double s = 0.0;
        for (const auto& c : curves) s += c.values[k];
        mean[k] = s / count;
        double ss = 0.0;
        for (const auto& c : curves) ss += (c.values[k] - mean[k]) * (c.values[k] - mean[k]);
        var[k] = ss / (count - 1.0);
    }
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < m; ++k) integral += 0.5 * (grid[k + 1] - grid[k]) * (var[k] + var[k + 1]);
    GbmCalibration out;
    out.varsigma0 = std::sqrt(2.0 * integral);
    const double v2 = 0.5 * out.varsigma0 * out.varsigma0;
    out.mu_curve.resize(m);
    for (std::size_t k = 1; k < m; ++k) out.mu_curve[k] = mean[k] / grid[k] + v2;
    out.mu_curve[0] = out.mu_curve[1];
    return out;
}

/// Rows are projections of each curve onto phi_start .. phi_{start+p-1};
/// the last m_n rows form the hold-out.
[[nodiscard]] inline DataMatrix coefficient_matrix(std::span<const CurveSample> curves, std::size_t p,
                                                   std::size_t start_index, std::size_t m_n) {
    if (p < 1) throw std::invalid_argument("coefficient_matrix: p must be >= 1");
    if (curves.empty()) throw std::invalid_argument("coefficient_matrix: no curves");
    const ProjectionTable table(curves.front().grid, start_index, p);
    Matrix x(curves.size(), p);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        if (!table.matches(curves[i].grid)) throw std::invalid_argument("coefficient_matrix: grid mismatch");
        table.project(curves[i].values, x.row(i));
    }
    if (curves.size() <= m_n) throw std::invalid_argument("coefficient_matrix: not enough curves for the hold-out");
    return DataMatrix(std::move(x), curves.size() - m_n, m_n);
}

struct FunctionalTestSettings {
    std::size_t p = 100;
    std::size_t start_index = 1;
    double alpha = 0.05;
    std::size_t bootstrap_draws = 500;
    std::uint64_t seed = 0;
    std::size_t ell_n = 10;
    std::size_t m_n = 30;
    double tau = 0.9;
};

/// Projects, fits, bootstraps and tests whether every coefficient is zero.
[[nodiscard]] inline TestOutcome functional_zero_test(std::span<const CurveSample> curves,
                                                      const FunctionalTestSettings& s, unsigned threads = 1) {
    const BlockScheme scheme(s.m_n, s.ell_n);
    const DataMatrix data = coefficient_matrix(curves, s.p, s.start_index, s.m_n);
    const MomEstimates est = fit_estimates(data, scheme, s.tau);
    const BootstrapDistribution boot = run_bootstrap(data, est, s.bootstrap_draws, s.seed, threads);
    std::vector<std::size_t> coords(s.p);
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    return zero_exclusion_test(data, est, boot, s.alpha, coords);
}

}  // namespace robmax
