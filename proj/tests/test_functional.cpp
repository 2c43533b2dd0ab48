#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "robmax/functional.hpp"

using namespace robmax;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<CurveSample> gbm_paths(std::uint64_t seed, const GbmSpec& spec, std::size_t count, bool centered) {
    const RngStream root(seed);
    std::vector<CurveSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RngStream s = root.child(i);
        auto c = sample_gbm(s, spec);
        if (centered)
            for (double& v : c.values) v -= 1.0;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

TEST_CASE("cosine basis values and orthonormality", "[functional]") {
    CHECK(cosine_basis(1, 0.37) == 1.0);
    CHECK_THAT(cosine_basis(2, 0.0), WithinAbs(std::numbers::sqrt2, 1e-15));
    CHECK_THAT(cosine_basis(2, 0.5), WithinAbs(0.0, 1e-15));
    CHECK_THAT(cosine_basis(3, 1.0), WithinAbs(std::numbers::sqrt2, 1e-14));
    CHECK_THROWS_AS(cosine_basis(0, 0.1), std::invalid_argument);

    const std::size_t K = 1000;
    const auto grid = unit_grid(K);
    for (std::size_t a = 1; a <= 6; ++a)
        for (std::size_t b = a; b <= 6; ++b) {
            double s = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const double fa = cosine_basis(a, grid[k]) * cosine_basis(b, grid[k]);
                const double fb = cosine_basis(a, grid[k + 1]) * cosine_basis(b, grid[k + 1]);
                s += 0.5 * (fa + fb) / static_cast<double>(K);
            }
            CHECK_THAT(s, WithinAbs(a == b ? 1.0 : 0.0, 1e-4));
        }
}

TEST_CASE("grids", "[functional]") {
    const auto u = unit_grid(4);
    CHECK(u == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto c = cell_grid(4);
    CHECK(c == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(unit_grid(0), std::invalid_argument);
}

TEST_CASE("projection fixtures", "[functional]") {
    const auto grid = unit_grid(100);
    const CurveSample zero{grid, std::vector<double>(grid.size(), 0.0)};
    for (double v : project_curve(zero, 1, 5)) CHECK(v == 0.0);

    const CurveSample one{grid, std::vector<double>(grid.size(), 1.0)};
    const auto e1 = project_curve(one, 1, 5);
    CHECK_THAT(e1[0], WithinAbs(1.0, 1e-3));
    for (std::size_t j = 1; j < 5; ++j) CHECK_THAT(e1[j], WithinAbs(0.0, 1e-3));

    const auto fine = unit_grid(1000);
    CurveSample phi3{fine, std::vector<double>(fine.size())};
    for (std::size_t k = 0; k < fine.size(); ++k) phi3.values[k] = cosine_basis(3, fine[k]);
    const auto e3 = project_curve(phi3, 1, 6);
    for (std::size_t j = 0; j < 6; ++j) CHECK_THAT(e3[j], WithinAbs(j == 2 ? 1.0 : 0.0, 1e-4));

    // Starting the basis later shifts the coefficient vector.
    const auto shifted = project_curve(phi3, 2, 3);
    CHECK(shifted[1] == e3[2]);
}

TEST_CASE("cell samples integrate the basis over each cell", "[functional]") {
    const CurveSample flat{cell_grid(30), std::vector<double>(30, 0.5)};
    const auto coef = project_curve(flat, 1, 10);
    CHECK_THAT(coef[0], WithinAbs(0.5, 1e-14));
    for (std::size_t j = 1; j < 10; ++j) CHECK_THAT(coef[j], WithinAbs(0.0, 1e-14));

    // A single nonzero cell picks up the exact integral of phi_j on that cell.
    CurveSample spike{cell_grid(4), {0.0, 2.0, 0.0, 0.0}};
    const auto c2 = project_curve(spike, 2, 1);
    const double expected = 2.0 * std::numbers::sqrt2 * (std::sin(std::numbers::pi * 0.5) - std::sin(std::numbers::pi * 0.25)) / std::numbers::pi;
    CHECK_THAT(c2[0], WithinAbs(expected, 1e-14));
}

TEST_CASE("curve validation", "[functional]") {
    CHECK_THROWS_AS((CurveSample{{0.0, 0.5}, {1.0}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CurveSample{{0.0, 0.5, 0.6}, {1.0, 1.0, 1.0}}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((CurveSample{{0.0, 1.0}, {1.0, std::nan("")}}.validate()), std::invalid_argument);
    CHECK_NOTHROW((CurveSample{{0.0, 0.5, 1.0}, {1.0, 2.0, 3.0}}.validate()));
}

TEST_CASE("GBM paths", "[functional]") {
    RngStream s(1);
    const auto flat = sample_gbm(s, GbmSpec::constant_drift(0.0, 1.0, 0.0, 50));
    for (double v : flat.values) CHECK_THAT(v, WithinAbs(1.0, 1e-15));
    CHECK_THROWS_AS(sample_gbm(s, GbmSpec{0.0, {1.0}, 0.2, 10}), std::invalid_argument);

    const auto spec = GbmSpec::constant_drift(1.0, 1.0, 0.2, 100);
    const auto paths = gbm_paths(3, spec, 10000, false);
    double sum = 0.0, sum2 = 0.0, incr2 = 0.0;
    for (const auto& p : paths) {
        REQUIRE(p.values.front() == 1.0);
        for (double v : p.values) REQUIRE(v > 0.0);
        const double end = p.values.back();
        sum += end;
        sum2 += end * end;
        for (std::size_t k = 1; k < p.values.size(); ++k) {
            // log increments have mean (h mu - varsigma^2/2)/K and variance varsigma^2/K
            const double d = std::log(p.values[k] / p.values[k - 1]) - (1.0 - 0.02) / 100.0;
            incr2 += d * d;
        }
    }
    const double n = 10000.0;
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - std::exp(1.0)) <= 3.0 * se);
    const double incr_var = incr2 / (n * 100.0);
    CHECK(std::abs(incr_var / (0.04 / 100.0) - 1.0) <= 0.1);
}

TEST_CASE("GBM calibration", "[functional]") {
    const auto grid = unit_grid(10);
    std::vector<CurveSample> same(5, CurveSample{grid, std::vector<double>(grid.size(), 0.0)});
    for (auto& c : same)
        for (std::size_t k = 0; k < grid.size(); ++k) c.values[k] = 0.3 * grid[k];
    const auto flat = calibrate_gbm(same);
    CHECK_THAT(flat.varsigma0, WithinAbs(0.0, 1e-12));
    for (double m : flat.mu_curve) CHECK_THAT(m, WithinAbs(0.3, 1e-12));

    // Cumulative log-returns of a GBM with mu = 0.4, varsigma0 = 0.3.
    const auto spec = GbmSpec::constant_drift(1.0, 0.4, 0.3, 50);
    auto paths = gbm_paths(17, spec, 4000, false);
    for (auto& p : paths)
        for (double& v : p.values) v = std::log(v);
    const auto fit = calibrate_gbm(paths);
    CHECK(std::abs(fit.varsigma0 / 0.3 - 1.0) <= 0.05);
    // At t = 1, mean log-return has sd 0.3 / sqrt(4000).
    CHECK(std::abs(fit.mu_curve.back() - 0.4) <= 3.0 * 0.3 / std::sqrt(4000.0));
    CHECK(fit.mu_curve[0] == fit.mu_curve[1]);

    CHECK_THROWS_AS(calibrate_gbm(std::span<const CurveSample>(paths.data(), 1)), std::invalid_argument);
}

TEST_CASE("coefficient_matrix shape and rows", "[functional]") {
    const auto spec = GbmSpec::constant_drift(0.0, 1.0, 0.2, 40);
    const auto paths = gbm_paths(5, spec, 30, true);
    const auto data = coefficient_matrix(paths, 12, 1, 10);
    CHECK(data.n() == 20);
    CHECK(data.m_n() == 10);
    CHECK(data.p() == 12);
    const auto row7 = project_curve(paths[7], 1, 12);
    for (std::size_t j = 0; j < 12; ++j) CHECK_THAT(data.values()(7, j), WithinAbs(row7[j], 1e-14));
    CHECK_THROWS_AS(coefficient_matrix(paths, 12, 1, 30), std::invalid_argument);
}

TEST_CASE("coefficient spread decays with the basis index", "[functional]") {
    const auto spec = GbmSpec::constant_drift(0.0, 1.0, 0.2, 100);
    const auto paths = gbm_paths(6, spec, 300, true);
    const auto data = coefficient_matrix(paths, 50, 1, 30);
    auto sd = [&](std::size_t j) {
        const auto col = data.main_column(j);
        double m = 0, s = 0;
        for (double v : col) m += v;
        m /= static_cast<double>(col.size());
        for (double v : col) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(col.size() - 1));
    };
    CHECK(sd(49) / sd(0) < 0.5);
}

TEST_CASE("functional_zero_test determinism, level and power", "[functional]") {
    FunctionalTestSettings settings;
    settings.p = 30;
    settings.bootstrap_draws = 200;
    settings.seed = 11;

    const auto null_spec = GbmSpec::constant_drift(0.0, 1.0, 0.2, 50);
    const auto paths = gbm_paths(8, null_spec, 300, true);
    const auto a = functional_zero_test(paths, settings);
    const auto b = functional_zero_test(paths, settings, 3);
    CHECK(a == b);
    CHECK(a.p_value > 0.0);
    CHECK(a.p_value <= 1.0);

    int rejections_null = 0, rejections_alt = 0;
    const auto alt_spec = GbmSpec::constant_drift(0.3, 1.0, 0.2, 50);
    for (std::uint64_t r = 0; r < 20; ++r) {
        settings.seed = 100 + r;
        rejections_null += functional_zero_test(gbm_paths(1000 + r, null_spec, 300, true), settings).reject;
        rejections_alt += functional_zero_test(gbm_paths(2000 + r, alt_spec, 300, true), settings).reject;
    }
    CHECK(rejections_null <= 4);
    CHECK(rejections_alt >= 15);
}
