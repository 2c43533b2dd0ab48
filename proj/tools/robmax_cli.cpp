// robmax: robust max-statistic bootstrap inference from the command line.
//
//   robmax simulate   --config cov.cfg --out coverage.csv
//   robmax ci         --data obs.csv --m-n 50 --out band.csv
//   robmax test-drift --config drift.cfg --out power.csv
//   robmax test-pairs --data AAPL_MSFT.csv --label AAPL/MSFT --out pairs.csv
//   robmax diagnose   --data obs.csv --m-n 50 --out decay.csv [--ks-probe]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robmax/robmax.hpp"
#include "robmax/harness/config.hpp"
#include "robmax/harness/diagnostics.hpp"
#include "robmax/harness/experiments.hpp"
#include "robmax/harness/pairs.hpp"
#include "robmax/harness/report.hpp"

namespace {

using namespace robmax;
using namespace robmax::harness;
using nlohmann::ordered_json;

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_config) {
    auto* c = cmd->add_option("--config", o.config, "Configuration file (key = value)");
    if (needs_config) c->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed (overrides the config)");
    cmd->add_option("--out", o.out, "Report CSV path; a .json sidecar is written next to it");
    cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
}

DataMatrix split_table(const DataTable& t, std::size_t m_n) {
    if (t.values.rows() <= m_n) throw std::invalid_argument("data has no rows left after the hold-out");
    return DataMatrix(t.values, t.values.rows() - m_n, m_n);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust max-statistic bootstrap inference for heavy-tailed high-dimensional data"};
    app.require_subcommand(1);

    // simulate
    CommonOptions sim;
    std::optional<std::size_t> sim_trials, sim_b;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage study");
    add_common(simulate, sim, false);
    simulate->add_option("--trials", sim_trials, "Override the number of trials");
    simulate->add_option("--B", sim_b, "Override the number of bootstrap draws");

    // ci
    CommonOptions ci;
    std::string ci_data;
    std::size_t ci_m_n = 50, ci_ell = 10, ci_b = 500;
    double ci_tau = 0.9, ci_alpha = 0.05;
    auto* ci_cmd = app.add_subcommand("ci", "Simultaneous confidence intervals for a data CSV");
    add_common(ci_cmd, ci, false);
    ci_cmd->add_option("--data", ci_data, "Observation CSV; the last m_n rows are the hold-out")->required()->check(CLI::ExistingFile);
    ci_cmd->add_option("--m-n", ci_m_n, "Hold-out size");
    ci_cmd->add_option("--ell-n", ci_ell, "MOM block length");
    ci_cmd->add_option("--tau", ci_tau, "Partial standardization exponent");
    ci_cmd->add_option("--alpha", ci_alpha, "Nominal simultaneous error level");
    ci_cmd->add_option("--B", ci_b, "Bootstrap draws");

    // test-drift
    CommonOptions drift;
    std::optional<std::size_t> drift_trials;
    auto* drift_cmd = app.add_subcommand("test-drift", "Power curve of the GBM zero-drift test");
    add_common(drift_cmd, drift, false);
    drift_cmd->add_option("--trials", drift_trials, "Override the number of trials per h");

    // test-pairs
    CommonOptions pairs;
    std::vector<std::string> pairs_files, pairs_labels;
    PairsScreenSettings pairs_settings;
    auto* pairs_cmd = app.add_subcommand("test-pairs", "Constancy test of log-return differences for stock pairs");
    add_common(pairs_cmd, pairs, false);
    pairs_cmd->add_option("--data", pairs_files, "Pairs CSV files (timestamp,price_a,price_b)")->required()->check(CLI::ExistingFile);
    pairs_cmd->add_option("--label", pairs_labels, "Row labels, one per file (default: file name)");
    pairs_cmd->add_option("--p", pairs_settings.p, "Number of tested cosine coefficients");
    pairs_cmd->add_option("--ell-n", pairs_settings.ell_n, "MOM block length");
    pairs_cmd->add_option("--alpha", pairs_settings.alpha, "Level for the reject column");
    pairs_cmd->add_option("--B", pairs_settings.bootstrap_draws, "Bootstrap draws");
    pairs_cmd->add_option("--tau", pairs_settings.tau, "Partial standardization exponent");

    // diagnose
    CommonOptions diag;
    std::string diag_data;
    std::size_t diag_m_n = 50, diag_ell = 10;
    double diag_tau = 0.9;
    bool ks_probe = false;
    std::size_t ks_draws = 2000;
    auto* diag_cmd = app.add_subcommand("diagnose", "Variance-decay profile and bootstrap KS probe");
    add_common(diag_cmd, diag, false);
    diag_cmd->add_option("--data", diag_data, "Observation CSV for the variance-decay profile")->check(CLI::ExistingFile);
    diag_cmd->add_option("--m-n", diag_m_n, "Hold-out size");
    diag_cmd->add_option("--ell-n", diag_ell, "MOM block length");
    diag_cmd->add_option("--tau", diag_tau, "Partial standardization exponent");
    diag_cmd->add_flag("--ks-probe", ks_probe, "Compare Monte Carlo and bootstrap laws of the max statistic");
    diag_cmd->add_option("--draws", ks_draws, "Monte Carlo and bootstrap draws for the KS probe");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            ExperimentConfig cfg = sim.config.empty() ? ExperimentConfig{} : load_config(sim.config);
            if (sim.seed) cfg.seed = *sim.seed;
            if (sim_trials) cfg.trials = *sim_trials;
            if (sim_b) cfg.bootstrap_draws = *sim_b;
            if (!sim.out.empty()) cfg.output = sim.out;
            const auto rows = run_coverage_experiment(cfg, sim.threads);
            ordered_json res = ordered_json::array();
            for (const auto& r : rows)
                res.push_back({{"alpha", r.alpha}, {"coverage", r.coverage}, {"mean_median_width", r.mean_median_width}});
            write_report(cfg.output, coverage_csv(rows), sidecar("simulate", to_json(cfg), res));
            std::cout << coverage_csv(rows);
        } else if (*ci_cmd) {
            const auto table = load_data_csv(ci_data);
            const DataMatrix data = split_table(table, ci_m_n);
            const BlockScheme scheme(ci_m_n, ci_ell);
            const auto est = fit_estimates(data, scheme, ci_tau);
            const std::uint64_t seed = ci.seed.value_or(1);
            const auto boot = run_bootstrap(data, est, ci_b, seed, ci.threads);
            const auto band = simultaneous_cis(data, est, boot, ci_alpha);
            const std::string out = ci.out.empty() ? "band.csv" : ci.out;
            ordered_json cfg{{"data", ci_data}, {"m_n", ci_m_n}, {"ell_n", ci_ell}, {"tau", ci_tau},
                             {"alpha", ci_alpha}, {"B", ci_b}, {"seed", seed}};
            ordered_json res{{"q_minus", band.q_minus}, {"q_plus", band.q_plus}};
            write_report(out, band_csv(band, table.names), sidecar("ci", cfg, res));
            std::cout << band_csv(band, table.names);
        } else if (*drift_cmd) {
            DriftConfig cfg = drift.config.empty() ? DriftConfig{} : load_drift_config(drift.config);
            if (drift.seed) cfg.seed = *drift.seed;
            if (drift_trials) cfg.trials = *drift_trials;
            if (!drift.out.empty()) cfg.output = drift.out;
            const auto rows = run_power_curve(cfg, drift.threads);
            ordered_json res = ordered_json::array();
            for (const auto& r : rows) res.push_back({{"h", r.h}, {"rejection_rate", r.rejection_rate}});
            write_report(cfg.output, power_csv(rows), sidecar("test-drift", to_json(cfg), res));
            std::cout << power_csv(rows);
        } else if (*pairs_cmd) {
            if (!pairs_labels.empty() && pairs_labels.size() != pairs_files.size())
                throw std::invalid_argument("--label must be given once per --data file");
            pairs_settings.seed = pairs.seed.value_or(1);
            std::vector<PairsReport> rows;
            ordered_json ingest = ordered_json::array();
            for (std::size_t k = 0; k < pairs_files.size(); ++k) {
                const auto curves = ingest_pairs_csv(pairs_files[k]);
                const std::string label = pairs_labels.empty() ? pairs_files[k] : pairs_labels[k];
                rows.push_back(run_pairs_screen(curves.curves, label, pairs_settings, pairs.threads));
                ingest.push_back({{"file", pairs_files[k]}, {"curves", curves.curves.size()},
                                  {"complete_windows", curves.complete_windows},
                                  {"dropped_missing", curves.dropped_missing}});
            }
            const std::string out = pairs.out.empty() ? "pairs.csv" : pairs.out;
            ordered_json cfg{{"p", pairs_settings.p}, {"ell_n", pairs_settings.ell_n}, {"alpha", pairs_settings.alpha},
                             {"B", pairs_settings.bootstrap_draws}, {"tau", pairs_settings.tau},
                             {"seed", pairs_settings.seed}};
            write_report(out, pairs_csv(rows), sidecar("test-pairs", cfg, {{"ingest", ingest}}));
            std::cout << pairs_csv(rows);
        } else if (*diag_cmd) {
            if (diag_data.empty() && !ks_probe) throw std::invalid_argument("diagnose needs --data and/or --ks-probe");
            const std::string out = diag.out.empty() ? "diagnose.csv" : diag.out;
            ordered_json cfg = ordered_json::object();
            ordered_json res = ordered_json::object();
            std::string csv;
            if (!diag_data.empty()) {
                const auto table = load_data_csv(diag_data);
                const DataMatrix data = split_table(table, diag_m_n);
                const auto est = fit_estimates(data, BlockScheme(diag_m_n, diag_ell), diag_tau);
                const auto decay = variance_decay_diagnostic(est);
                cfg["data"] = diag_data;
                cfg["m_n"] = diag_m_n;
                cfg["ell_n"] = diag_ell;
                res["beta_hat"] = decay.beta_hat;
                csv = decay_csv(decay);
            }
            if (ks_probe) {
                KsProbeSettings ks;
                if (!diag.config.empty()) {
                    const auto c = load_config(diag.config);
                    ks.distribution = c.distribution;
                    ks.correlation = c.correlation;
                    ks.n = c.n();
                    ks.m_n = c.m_n;
                    ks.ell_n = c.ell_n;
                    ks.p = c.p;
                    ks.tau = c.tau;
                    ks.seed = c.seed;
                }
                if (diag.seed) ks.seed = *diag.seed;
                ks.mc_draws = ks.bootstrap_draws = ks_draws;
                const auto probe = run_ks_probe(ks, diag.threads);
                cfg["ks_probe"] = {{"n", ks.n}, {"m_n", ks.m_n}, {"p", ks.p}, {"draws", ks_draws}, {"seed", ks.seed}};
                res["ks_distance"] = probe.distance;
                if (csv.empty()) csv = "ks_distance\n" + csv_number(probe.distance) + "\n";
            }
            write_report(out, csv, sidecar("diagnose", cfg, res));
            std::cout << csv;
            if (res.contains("beta_hat")) std::cout << "beta_hat," << csv_number(res["beta_hat"].get<double>()) << "\n";
            if (res.contains("ks_distance"))
                std::cout << "ks_distance," << csv_number(res["ks_distance"].get<double>()) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
