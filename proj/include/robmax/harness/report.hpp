#pragma once

// Report emission: CSV tables plus a JSON sidecar holding the full
// configuration and seed. Numbers use shortest round-trip formatting so the
// bytes depend only on the values.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "robmax/harness/config.hpp"
#include "robmax/harness/diagnostics.hpp"
#include "robmax/harness/experiments.hpp"
#include "robmax/harness/pairs.hpp"
#include "robmax/inference.hpp"

namespace robmax::harness {

inline std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return detail::format_double(v);
}

[[nodiscard]] inline std::string coverage_csv(const std::vector<CoverageRow>& rows) {
    std::ostringstream o;
    o << "alpha,coverage,mean_median_width,trials,width_trials,unbounded_trials,failed_trials\n";
    for (const auto& r : rows)
        o << csv_number(r.alpha) << ',' << csv_number(r.coverage) << ',' << csv_number(r.mean_median_width) << ','
          << r.trials << ',' << r.width_trials << ',' << r.unbounded_trials << ',' << r.failed_trials << '\n';
    return o.str();
}

[[nodiscard]] inline std::string power_csv(const std::vector<PowerRow>& rows) {
    std::ostringstream o;
    o << "h,rejection_rate,rejections,trials,failed_trials\n";
    for (const auto& r : rows)
        o << csv_number(r.h) << ',' << csv_number(r.rejection_rate) << ',' << r.rejections << ',' << r.trials << ','
          << r.failed_trials << '\n';
    return o.str();
}

[[nodiscard]] inline std::string band_csv(const ConfidenceBand& band, const std::vector<std::string>& names) {
    std::ostringstream o;
    o << "coordinate,lo,hi,empty\n";
    for (std::size_t j = 0; j < band.intervals.size(); ++j) {
        const auto& iv = band.intervals[j];
        o << (j < names.size() ? names[j] : std::to_string(j + 1)) << ',';
        if (iv.empty) o << ",,1\n";
        else o << csv_number(iv.lo) << ',' << csv_number(iv.hi) << ",0\n";
    }
    return o.str();
}

[[nodiscard]] inline std::string pairs_csv(const std::vector<PairsReport>& rows) {
    std::ostringstream o;
    o << "pair,p_value,reject,n,m_n\n";
    for (const auto& r : rows)
        o << r.label << ',' << csv_number(r.p_value) << ',' << (r.reject ? 1 : 0) << ',' << r.n << ',' << r.m_n << '\n';
    return o.str();
}

[[nodiscard]] inline std::string decay_csv(const VarianceDecay& d) {
    std::ostringstream o;
    o << "rank,sigma\n";
    for (std::size_t j = 0; j < d.sorted_sigmas.size(); ++j) o << j + 1 << ',' << csv_number(d.sorted_sigmas[j]) << '\n';
    return o.str();
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["distribution"] = c.distribution == Distribution::EllipticalT6 ? "elliptical_t6" : "separable_pareto6";
    j["correlation"] = c.correlation == CorrelationKind::Autoregressive ? "ar" : "algebraic";
    j["n_total"] = c.n_total;
    j["m_n"] = c.m_n;
    j["ell_n"] = c.ell_n;
    j["p"] = c.p;
    j["tau"] = c.tau;
    j["alpha"] = c.alphas;
    j["trials"] = c.trials;
    j["B"] = c.bootstrap_draws;
    j["seed"] = c.seed;
    return j;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const DriftConfig& c) {
    nlohmann::ordered_json j;
    j["n_total"] = c.n_total;
    j["m_n"] = c.m_n;
    j["ell_n"] = c.ell_n;
    j["p"] = c.p;
    j["tau"] = c.tau;
    j["alpha"] = c.alpha;
    j["trials"] = c.trials;
    j["B"] = c.bootstrap_draws;
    j["seed"] = c.seed;
    j["steps"] = c.steps;
    j["varsigma0"] = c.varsigma0;
    j["mu"] = c.mu;
    j["h_grid"] = c.h_grid;
    return j;
}

/// Sidecar document: {"command": ..., "config": ..., "results": ...}.
[[nodiscard]] inline std::string sidecar(const std::string& command, const nlohmann::ordered_json& config,
                                         const nlohmann::ordered_json& results = nlohmann::ordered_json::object()) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["config"] = config;
    j["results"] = results;
    return j.dump(2) + "\n";
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

/// Writes `csv` to path and the sidecar to path + ".json".
inline void write_report(const std::string& path, const std::string& csv, const std::string& json) {
    write_text(path, csv);
    write_text(path + ".json", json);
}

}  // namespace robmax::harness
