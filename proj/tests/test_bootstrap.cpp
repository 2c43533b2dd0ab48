#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "robmax/bootstrap.hpp"
#include "support.hpp"

using namespace robmax;
using Catch::Matchers::WithinAbs;

TEST_CASE("bootstrap_draw with zero multipliers is zero", "[bootstrap]") {
    std::mt19937_64 g(1);
    const auto data = testing::random_data(g, 30, 10, 4);
    const auto est = fit_estimates(data, BlockScheme(10, 2), 0.9);
    const auto mm = bootstrap_draw(data, est, std::vector<double>(30, 0.0));
    CHECK(mm.max == 0.0);
    CHECK(mm.min == 0.0);
}

TEST_CASE("a column with identical truncated summands contributes nothing", "[bootstrap]") {
    Matrix x(6, 1, 5.0);
    x(4, 0) = 0.0;  // hold-out varies so the variance is positive
    const DataMatrix data(x, 4, 2);
    const auto est = fit_estimates(data, BlockScheme(2, 2), 0.9);
    std::mt19937_64 g(2);
    for (int k = 0; k < 20; ++k) {
        const auto mm = bootstrap_draw(data, est, testing::random_vector(g, 4));
        CHECK(mm.max == 0.0);
        CHECK(mm.min == 0.0);
    }
}

TEST_CASE("two-observation hand algebra", "[bootstrap]") {
    // Z = (3, 1), xi = (1, -1): centered halves give (a - b) / (sigma^tau sqrt 2).
    Matrix x(4, 1);
    x(0, 0) = 3.0;
    x(1, 0) = 1.0;
    const DataMatrix data(x, 2, 2);
    const auto est = testing::manual_estimates({0.0}, {2.0}, {100.0}, 0.5, 2);
    const auto mm = bootstrap_draw(data, est, std::vector<double>{1.0, -1.0});
    const double expected = 2.0 / (std::sqrt(2.0) * std::sqrt(2.0));
    CHECK_THAT(mm.max, WithinAbs(expected, 1e-15));
    CHECK_THAT(mm.min, WithinAbs(expected, 1e-15));
    CHECK_THROWS_AS(bootstrap_draw(data, est, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("per-draw max is never below min", "[bootstrap][property]") {
    std::mt19937_64 g(3);
    const auto data = testing::random_data(g, 40, 10, 6);
    const MultiplierKernel kernel(data, fit_estimates(data, BlockScheme(10, 2), 0.9));
    std::normal_distribution<double> z;
    std::vector<double> xi(40);
    for (int k = 0; k < 500; ++k) {
        for (double& v : xi) v = z(g);
        const auto mm = kernel.draw(xi);
        REQUIRE(mm.max >= mm.min);
    }
}

TEST_CASE("run_bootstrap is deterministic and sorted", "[bootstrap]") {
    std::mt19937_64 g(4);
    const auto data = testing::random_data(g, 50, 10, 5);
    const auto est = fit_estimates(data, BlockScheme(10, 2), 0.9);
    const auto a = run_bootstrap(data, est, 200, 42);
    const auto b = run_bootstrap(data, est, 200, 42);
    CHECK(a.sorted_max == b.sorted_max);
    CHECK(a.sorted_min == b.sorted_min);
    CHECK(std::is_sorted(a.sorted_max.begin(), a.sorted_max.end()));
    CHECK(std::is_sorted(a.sorted_min.begin(), a.sorted_min.end()));
    const auto c = run_bootstrap(data, est, 200, 43);
    CHECK(c.sorted_max != a.sorted_max);

    const auto five = run_bootstrap(data, est, 5, 9);
    CHECK(five.sorted_max.size() == 5);
    CHECK(five.sorted_min.size() == 5);
    CHECK(std::is_sorted(five.sorted_max.begin(), five.sorted_max.end()));
    CHECK_THROWS_AS(run_bootstrap(data, est, 0, 9), std::invalid_argument);
}

TEST_CASE("run_bootstrap does not depend on the worker count", "[bootstrap]") {
    std::mt19937_64 g(5);
    const auto data = testing::random_data(g, 50, 10, 5);
    const auto est = fit_estimates(data, BlockScheme(10, 2), 0.9);
    const auto one = run_bootstrap(data, est, 301, 77, 1);
    for (unsigned t : {2u, 3u, 8u}) {
        const auto many = run_bootstrap(data, est, 301, 77, t);
        REQUIRE(one.sorted_max == many.sorted_max);
        REQUIRE(one.sorted_min == many.sorted_min);
    }
}

TEST_CASE("bootstrap draws are invariant to constant row shifts", "[bootstrap][property]") {
    std::mt19937_64 g(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto data = testing::random_data(g, 60, 20, 7);
        const auto shift = testing::random_vector(g, 7, -50.0, 50.0);
        Matrix moved = data.values();
        for (std::size_t i = 0; i < moved.rows(); ++i)
            for (std::size_t j = 0; j < 7; ++j) moved(i, j) += shift[j];
        const DataMatrix shifted(moved, 60, 20);
        const BlockScheme scheme(20, 10);
        const auto a = run_bootstrap(data, fit_estimates(data, scheme, 0.9), 100, 5);
        const auto b = run_bootstrap(shifted, fit_estimates(shifted, scheme, 0.9), 100, 5);
        for (std::size_t k = 0; k < 100; ++k) {
            REQUIRE_THAT(b.sorted_max[k], WithinAbs(a.sorted_max[k], 1e-10));
            REQUIRE_THAT(b.sorted_min[k], WithinAbs(a.sorted_min[k], 1e-10));
        }
    }
}

TEST_CASE("empirical_quantile uses the ceiling order statistic", "[bootstrap]") {
    const std::vector<double> v{10, 20, 30, 40, 50};
    CHECK(empirical_quantile(v, 0.5) == 30.0);
    CHECK(empirical_quantile(v, 1.0) == 50.0);
    CHECK(empirical_quantile(v, 0.2) == 10.0);
    CHECK(empirical_quantile(v, 0.21) == 20.0);
    std::vector<double> big(500);
    for (std::size_t i = 0; i < 500; ++i) big[i] = static_cast<double>(i + 1);
    CHECK(empirical_quantile(big, 0.95) == 475.0);
    CHECK(empirical_quantile(big, 0.975) == 488.0);
    CHECK_THROWS_AS(empirical_quantile(v, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(empirical_quantile(v, 1.01), std::invalid_argument);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST_CASE("empirical_quantile is monotone and returns an input element", "[bootstrap][property]") {
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> u(1e-6, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto v = testing::random_vector(g, 1 + trial % 37);
        std::sort(v.begin(), v.end());
        double a = u(g), b = u(g);
        if (a > b) std::swap(a, b);
        const double qa = empirical_quantile(v, a);
        REQUIRE(qa <= empirical_quantile(v, b));
        REQUIRE(std::find(v.begin(), v.end(), qa) != v.end());
    }
}
