#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "robmax/core.hpp"
#include "support.hpp"

using namespace robmax;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("truncate clamps symmetrically", "[core]") {
    CHECK(truncate(3.0, 2.0) == 2.0);
    CHECK(truncate(-3.0, 2.0) == -2.0);
    CHECK(truncate(1.5, 5.0) == 1.5);
    CHECK(truncate(4.0, 0.0) == 0.0);
}

TEST_CASE("truncate bound and identity region hold for sampled inputs", "[core][property]") {
    std::mt19937_64 g(11);
    std::uniform_real_distribution<double> ux(-100.0, 100.0), ut(0.0, 50.0);
    for (int k = 0; k < 10000; ++k) {
        const double x = ux(g), t = ut(g);
        const double y = truncate(x, t);
        REQUIRE(std::abs(y) <= t);
        if (std::abs(x) <= t) REQUIRE(y == x);
        REQUIRE(truncate(-x, t) == -y);
    }
}

TEST_CASE("BlockScheme validates its shape", "[core]") {
    CHECK_NOTHROW(BlockScheme(50, 10));
    CHECK(BlockScheme(50, 10).b_n() == 5);
    CHECK_THROWS_AS(BlockScheme(50, 7), std::invalid_argument);
    CHECK_THROWS_AS(BlockScheme(50, 4), std::invalid_argument);
    CHECK_THROWS_AS(BlockScheme(4, 0), std::invalid_argument);
}

TEST_CASE("DataMatrix validates the split", "[core]") {
    CHECK_THROWS_AS(DataMatrix(Matrix(5, 2), 2, 3), std::invalid_argument);  // odd m_n
    CHECK_THROWS_AS(DataMatrix(Matrix(5, 2), 1, 4), std::invalid_argument);  // n < 2
    CHECK_THROWS_AS(DataMatrix(Matrix(6, 2), 2, 2), std::invalid_argument);  // row count
    Matrix bad(4, 1);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(DataMatrix(bad, 2, 2), std::invalid_argument);
    const DataMatrix d(Matrix(6, 3), 4, 2);
    CHECK(d.p() == 3);
    CHECK(d.holdout_column(0).size() == 2);
}

TEST_CASE("block_means hand fixtures", "[core]") {
    const BlockScheme s2(6, 2);
    CHECK(block_means(std::vector<double>{1, 2, 3, 4, 5, 6}, s2) == std::vector<double>{1.5, 3.5, 5.5});
    CHECK(block_means(std::vector<double>{0, 0, 10, 0, 0, 0}, s2) == std::vector<double>{0, 5, 0});
    CHECK(block_means(std::vector<double>(6, 2.5), s2) == std::vector<double>(3, 2.5));
    CHECK_THROWS_AS(block_means(std::vector<double>{1, 2, 3, 4}, s2), std::invalid_argument);
}

TEST_CASE("mom_mean hand fixtures", "[core]") {
    const BlockScheme s2(6, 2);
    CHECK(mom_mean(std::vector<double>{1, 2, 3, 4, 5, 6}, s2) == 3.5);
    CHECK(mom_mean(std::vector<double>{0, 0, 10, 0, 0, 0}, s2) == 0.0);
    CHECK(mom_mean(std::vector<double>(6, -7.25), s2) == -7.25);
}

TEST_CASE("median of an even count averages the middle pair", "[core]") {
    CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    CHECK(median({5.0}) == 5.0);
    CHECK_THROWS(median({}));
}

TEST_CASE("mom_variance hand fixtures", "[core]") {
    const BlockScheme s4(4, 4);
    CHECK(mom_variance(std::vector<double>{0, 2, 2, 0}, s4) == 2.0);
    CHECK(mom_variance(std::vector<double>{0, 2, 0, 2}, s4) == 0.0);
    CHECK(mom_variance(std::vector<double>(4, 3.0), s4) == 0.0);
}

TEST_CASE("MOM estimators are shift and scale equivariant", "[core][property]") {
    std::mt19937_64 g(7);
    const BlockScheme scheme(50, 10);
    std::uniform_real_distribution<double> uc(-100.0, 100.0), us(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto x = testing::random_vector(g, 50);
        const double c = uc(g), s = us(g);
        std::vector<double> shifted(x), scaled(x);
        for (double& v : shifted) v += c;
        for (double& v : scaled) v *= s;
        REQUIRE_THAT(mom_mean(shifted, scheme), WithinAbs(mom_mean(x, scheme) + c, 1e-10));
        REQUIRE_THAT(mom_variance(shifted, scheme), WithinAbs(mom_variance(x, scheme), 1e-10));
        REQUIRE_THAT(mom_mean(scaled, scheme), WithinAbs(s * mom_mean(x, scheme), 1e-10));
        REQUIRE_THAT(mom_variance(scaled, scheme), WithinRel(s * s * mom_variance(x, scheme), 1e-12));
    }
}

TEST_CASE("fit_estimates derives truncation levels and weights", "[core]") {
    // n = 4 main rows; hold-out pairs (0, 2*sqrt2) twice give sigma^2 = 4.
    const double a = 2.0 * std::sqrt(2.0);
    Matrix x(8, 1);
    const double col[] = {1, 2, 3, 4, 0, 0, a, a};
    for (int i = 0; i < 8; ++i) x(i, 0) = col[i];
    const DataMatrix data(x, 4, 4);
    const auto est = fit_estimates(data, BlockScheme(4, 4), 0.9);
    CHECK_THAT(est.variances[0], WithinAbs(4.0, 1e-12));
    CHECK_THAT(est.trunc_levels[0], WithinAbs(4.0, 1e-12));
    CHECK_THAT(est.weights[0], WithinRel(1.0 / (std::pow(2.0, 0.9) * 2.0), 1e-12));

    const auto flat = fit_estimates(data, BlockScheme(4, 4), 0.0);
    CHECK(flat.weights[0] == 0.5);
}

TEST_CASE("fit_estimates rejects degenerate columns and bad tau", "[core]") {
    Matrix x(8, 2, 1.0);
    x(4, 0) = 0.0;  // column 0 varies in the hold-out, column 1 is constant
    const DataMatrix data(x, 4, 4);
    try {
        (void)fit_estimates(data, BlockScheme(4, 4), 0.9);
        FAIL("expected DegenerateVariance");
    } catch (const DegenerateVariance& e) {
        CHECK(e.coordinate() == 1);
    }
    CHECK_THROWS_AS(fit_estimates(data, BlockScheme(4, 4), 1.5), std::invalid_argument);
    CHECK_THROWS_AS(fit_estimates(data, BlockScheme(8, 2), 0.5), std::invalid_argument);
}

TEST_CASE("coordinate_stat hand fixtures", "[core]") {
    const std::vector<double> col{0, 2, 4, 6};
    CHECK(coordinate_stat(col, 3.0, 10.0, 1.0, 0.9) == 0.0);
    CHECK(coordinate_stat(col, 0.0, 10.0, 1.0, 0.9) == 6.0);
    CHECK(coordinate_stat(col, 0.0, 1.0, 1.0, 0.9) == 1.5);
    CHECK_THROWS_AS(coordinate_stat(col, 0.0, 1.0, 0.0, 0.9), std::invalid_argument);
}

TEST_CASE("coordinate_stat is non-increasing in the center", "[core][property]") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> ux(-8.0, 8.0), ut(0.0, 4.0), us(0.2, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto col = testing::random_vector(g, 20);
        const double t = ut(g), s = us(g);
        double a = ux(g), b = ux(g);
        if (a > b) std::swap(a, b);
        REQUIRE(coordinate_stat(col, a, t, s, 0.7) >= coordinate_stat(col, b, t, s, 0.7));
        const double sup = std::sqrt(20.0) * t / std::pow(s, 0.7);
        REQUIRE(std::abs(coordinate_stat(col, a, t, s, 0.7)) <= sup * (1 + 1e-12));
    }
}

TEST_CASE("max_min_statistic hand fixtures", "[core]") {
    Matrix x(6, 2);
    const double col[] = {0, 2, 4, 6};
    for (int i = 0; i < 4; ++i) x(i, 0) = x(i, 1) = col[i];
    x(4, 0) = x(4, 1) = 1.0;  // hold-out rows are unused here
    const DataMatrix data(x, 4, 2);
    const auto est = testing::manual_estimates({0, 0}, {1, 1}, {10, 10}, 0.9, 4);
    const auto mm = max_min_statistic(data, std::vector<double>{3.0, 0.0}, est);
    CHECK(mm.max == 6.0);
    CHECK(mm.min == 0.0);
    CHECK_THROWS_AS(max_min_statistic(data, std::vector<double>{0.0}, est), std::invalid_argument);

    Matrix x1(6, 1);
    for (int i = 0; i < 4; ++i) x1(i, 0) = col[i];
    const DataMatrix one(x1, 4, 2);
    const auto est1 = testing::manual_estimates({0}, {1}, {10}, 0.9, 4);
    const auto single = max_min_statistic(one, std::vector<double>{0.5}, est1);
    CHECK(single.max == single.min);
    CHECK(single.max == coordinate_stat(std::vector<double>(col, col + 4), 0.5, 10.0, 1.0, 0.9));
}

TEST_CASE("max statistic scale law and tau = 1 coordinate invariance", "[core][property]") {
    std::mt19937_64 g(19);
    const BlockScheme scheme(20, 10);
    std::uniform_real_distribution<double> uc(0.05, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto data = testing::random_data(g, 60, 20, 8);
        const auto mu = testing::random_vector(g, 8, -0.5, 0.5);
        const double tau = trial % 2 ? 0.9 : 0.3;
        const auto base = max_min_statistic(data, mu, fit_estimates(data, scheme, tau));

        const double c = uc(g);
        Matrix scaled = data.values();
        for (double& v : scaled.data()) v *= c;
        std::vector<double> mu_c(mu);
        for (double& v : mu_c) v *= c;
        const DataMatrix sd(scaled, 60, 20);
        const auto s = max_min_statistic(sd, mu_c, fit_estimates(sd, scheme, tau));
        const double f = std::pow(c, 1.0 - tau);
        REQUIRE_THAT(s.max, WithinRel(f * base.max, 1e-8) || WithinAbs(f * base.max, 1e-12));
        REQUIRE_THAT(s.min, WithinRel(f * base.min, 1e-8) || WithinAbs(f * base.min, 1e-12));

        // Per-coordinate scales under full standardization.
        const auto b1 = max_min_statistic(data, mu, fit_estimates(data, scheme, 1.0));
        Matrix per = data.values();
        std::vector<double> mu_p(mu);
        for (std::size_t j = 0; j < 8; ++j) {
            const double cj = uc(g);
            for (std::size_t i = 0; i < per.rows(); ++i) per(i, j) *= cj;
            mu_p[j] *= cj;
        }
        const DataMatrix pd(per, 60, 20);
        const auto p1 = max_min_statistic(pd, mu_p, fit_estimates(pd, scheme, 1.0));
        REQUIRE_THAT(p1.max, WithinAbs(b1.max, 1e-8));
        REQUIRE_THAT(p1.min, WithinAbs(b1.min, 1e-8));
    }
}
