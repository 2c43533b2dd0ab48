#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "robmax/bootstrap.hpp"
#include "robmax/core.hpp"
#include "robmax/datagen.hpp"
#include "robmax/functional.hpp"
#include "robmax/harness/config.hpp"
#include "robmax/harness/diagnostics.hpp"
#include "robmax/inference.hpp"
#include "robmax/parallel.hpp"
#include "robmax/rng.hpp"

namespace robmax::harness {

[[nodiscard]] inline CovarianceModel make_covariance(CorrelationKind kind, std::size_t p) {
    CorrelationSpec spec;
    spec.p = p;
    if (kind == CorrelationKind::Autoregressive) spec.kind = Autoregressive{0.5};
    else spec.kind = AlgebraicDecay{};
    return CovarianceModel(spec);
}

/// Mean-zero rows from the chosen heavy-tailed model.
[[nodiscard]] inline Matrix sample_rows(Distribution dist, const RngStream& stream, std::size_t rows,
                                        const CovarianceModel& cov) {
    return dist == Distribution::EllipticalT6 ? sample_elliptical_t6(stream, rows, cov)
                                              : sample_separable_pareto6(stream, rows, cov);
}

struct CoverageRow {
    double alpha = 0.0;
    double coverage = 0.0;           ///< fraction of trials where every interval holds 0
    double mean_median_width = 0.0;  ///< over trials whose intervals are all bounded
    std::size_t trials = 0;
    std::size_t width_trials = 0;
    std::size_t unbounded_trials = 0;  ///< trials with at least one infinite endpoint
    std::size_t failed_trials = 0;     ///< DegenerateVariance; counted as not covering
};

namespace detail {

struct TrialOutcome {
    bool failed = false;
    std::vector<char> covered;
    std::vector<char> unbounded;
    std::vector<double> median_width;
};

[[nodiscard]] inline double median_width(const ConfidenceBand& band) {
    std::vector<double> w;
    w.reserve(band.intervals.size());
    for (const auto& iv : band.intervals) w.push_back(iv.width());
    return median(std::move(w));
}

}  // namespace detail

/// Simultaneous coverage of the zero mean vector and median interval width,
/// one row per alpha. Trial t uses RngStream(seed).child(t).
[[nodiscard]] inline std::vector<CoverageRow> run_coverage_experiment(const ExperimentConfig& config,
                                                                      unsigned threads = 1) {
    validate(config);
    const CovarianceModel cov = make_covariance(config.correlation, config.p);
    const BlockScheme scheme(config.m_n, config.ell_n);
    const RngStream master(config.seed);
    const std::size_t na = config.alphas.size();
    std::vector<detail::TrialOutcome> outcomes(config.trials);

    parallel_for(config.trials, threads, [&](std::size_t t) {
        auto& out = outcomes[t];
        out.covered.assign(na, 0);
        out.unbounded.assign(na, 0);
        out.median_width.assign(na, 0.0);
        const RngStream trial = master.child(t);
        try {
            const DataMatrix data(sample_rows(config.distribution, trial.child(0), config.n_total, cov), config.n(),
                                  config.m_n);
            const MomEstimates est = fit_estimates(data, scheme, config.tau);
            const auto boot = run_bootstrap(data, est, config.bootstrap_draws, trial.child(1).key());
            for (std::size_t a = 0; a < na; ++a) {
                const auto band = simultaneous_cis(data, est, boot, config.alphas[a]);
                bool all = true;
                bool bounded = true;
                for (const auto& iv : band.intervals) {
                    all = all && iv.contains(0.0);
                    bounded = bounded && iv.bounded();
                }
                out.covered[a] = all;
                out.unbounded[a] = !bounded;
                if (bounded) out.median_width[a] = detail::median_width(band);
            }
        } catch (const DegenerateVariance&) {
            out.failed = true;
        }
    });

    std::vector<CoverageRow> rows(na);
    for (std::size_t a = 0; a < na; ++a) {
        auto& r = rows[a];
        r.alpha = config.alphas[a];
        r.trials = config.trials;
        double cover = 0.0;
        double width = 0.0;
        for (const auto& o : outcomes) {
            if (o.failed) {
                ++r.failed_trials;
                continue;
            }
            cover += o.covered[a] ? 1.0 : 0.0;
            if (o.unbounded[a]) {
                ++r.unbounded_trials;
            } else {
                width += o.median_width[a];
                ++r.width_trials;
            }
        }
        r.coverage = cover / static_cast<double>(config.trials);
        r.mean_median_width = r.width_trials ? width / static_cast<double>(r.width_trials)
                                             : std::numeric_limits<double>::quiet_NaN();
    }
    return rows;
}

struct PowerRow {
    double h = 0.0;
    double rejection_rate = 0.0;
    std::size_t rejections = 0;
    std::size_t trials = 0;
    std::size_t failed_trials = 0;
};

/// Curves S_i(t) - 1 for i.i.d. GBM paths; curve i uses stream.child(i).
[[nodiscard]] inline std::vector<CurveSample> simulate_centered_gbm(const RngStream& stream, const GbmSpec& spec,
                                                                    std::size_t count) {
    std::vector<CurveSample> curves;
    curves.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        RngStream s = stream.child(i);
        auto c = sample_gbm(s, spec);
        for (double& v : c.values) v -= 1.0;
        curves.push_back(std::move(c));
    }
    return curves;
}

/// Rejection frequency of the zero-drift test at each h. Trial t at grid
/// index a uses RngStream(seed).child(a).child(t).
[[nodiscard]] inline std::vector<PowerRow> run_power_curve(const DriftConfig& config, unsigned threads = 1) {
    validate(config);
    if (config.h_grid.empty()) throw ConfigError("h_grid must be nonempty");
    const RngStream master(config.seed);
    std::vector<PowerRow> rows(config.h_grid.size());
    for (std::size_t a = 0; a < config.h_grid.size(); ++a) {
        const GbmSpec spec = GbmSpec::constant_drift(config.h_grid[a], config.mu, config.varsigma0, config.steps);
        const RngStream level = master.child(a);
        std::vector<signed char> result(config.trials, 0);  // 1 reject, 0 accept, -1 failed
        parallel_for(config.trials, threads, [&](std::size_t t) {
            const RngStream trial = level.child(t);
            const auto curves = simulate_centered_gbm(trial.child(0), spec, config.n_total);
            FunctionalTestSettings s;
            s.p = config.p;
            s.start_index = 1;
            s.alpha = config.alpha;
            s.bootstrap_draws = config.bootstrap_draws;
            s.seed = trial.child(1).key();
            s.ell_n = config.ell_n;
            s.m_n = config.m_n;
            s.tau = config.tau;
            try {
                result[t] = functional_zero_test(curves, s).reject ? 1 : 0;
            } catch (const DegenerateVariance&) {
                result[t] = -1;
            }
        });
        auto& r = rows[a];
        r.h = config.h_grid[a];
        r.trials = config.trials;
        for (auto v : result) {
            if (v < 0) ++r.failed_trials;
            else r.rejections += static_cast<std::size_t>(v);
        }
        r.rejection_rate = static_cast<double>(r.rejections) / static_cast<double>(r.trials);
    }
    return rows;
}

struct KsProbeSettings {
    Distribution distribution = Distribution::SeparablePareto6;
    CorrelationKind correlation = CorrelationKind::Autoregressive;
    std::size_t n = 500;  ///< main sample size; the hold-out is extra
    std::size_t m_n = 50;
    std::size_t ell_n = 10;
    std::size_t p = 100;
    double tau = 0.9;
    std::size_t mc_draws = 2000;
    std::size_t bootstrap_draws = 2000;
    std::uint64_t seed = 1;
};

struct KsProbeResult {
    double distance = 0.0;
    std::vector<double> mc_max;    ///< Monte Carlo draws of the max statistic, sorted
    std::vector<double> boot_max;  ///< bootstrap draws from one dataset, sorted
};

/// Compares the sampling law of the max statistic at the true mean (zero)
/// with the bootstrap law from a single dataset.
[[nodiscard]] inline KsProbeResult run_ks_probe(const KsProbeSettings& s, unsigned threads = 1) {
    const CovarianceModel cov = make_covariance(s.correlation, s.p);
    const BlockScheme scheme(s.m_n, s.ell_n);
    const RngStream master(s.seed);
    const std::vector<double> mu(s.p, 0.0);
    KsProbeResult out;
    out.mc_max.resize(s.mc_draws);
    const RngStream mc = master.child(0);
    parallel_for(s.mc_draws, threads, [&](std::size_t r) {
        const DataMatrix data(sample_rows(s.distribution, mc.child(r), s.n + s.m_n, cov), s.n, s.m_n);
        const auto est = fit_estimates(data, scheme, s.tau);
        out.mc_max[r] = max_min_statistic(data, mu, est).max;
    });
    const DataMatrix data(sample_rows(s.distribution, master.child(1), s.n + s.m_n, cov), s.n, s.m_n);
    const auto est = fit_estimates(data, scheme, s.tau);
    const auto boot = run_bootstrap(data, est, s.bootstrap_draws, master.child(2).key(), threads);
    out.boot_max = boot.sorted_max;
    std::sort(out.mc_max.begin(), out.mc_max.end());
    out.distance = kolmogorov_distance(out.mc_max, out.boot_max);
    return out;
}

}  // namespace robmax::harness
