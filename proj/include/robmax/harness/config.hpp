#pragma once

// Experiment configuration as a flat `key = value` text document. Blank
// lines and lines starting with '#' are ignored; lists are comma-separated.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "robmax/core.hpp"

namespace robmax::harness {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Distribution { EllipticalT6, SeparablePareto6 };
enum class CorrelationKind { Autoregressive, Algebraic };

/// Euclidean coverage study settings; defaults are the reference design.
struct ExperimentConfig {
    Distribution distribution = Distribution::EllipticalT6;
    CorrelationKind correlation = CorrelationKind::Autoregressive;
    std::size_t n_total = 500;
    std::size_t m_n = 50;
    std::size_t ell_n = 10;
    std::size_t p = 100;
    double tau = 0.9;
    std::vector<double> alphas{0.05, 0.10};
    std::size_t trials = 500;
    std::size_t bootstrap_draws = 500;
    std::uint64_t seed = 1;
    std::string output = "coverage.csv";

    [[nodiscard]] std::size_t n() const noexcept { return n_total - m_n; }

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Drift-test power study on simulated geometric Brownian motion.
struct DriftConfig {
    std::size_t n_total = 300;
    std::size_t m_n = 30;
    std::size_t ell_n = 10;
    std::size_t p = 100;
    double tau = 0.9;
    double alpha = 0.05;
    std::size_t trials = 500;
    std::size_t bootstrap_draws = 500;
    std::uint64_t seed = 1;
    std::size_t steps = 100;
    double varsigma0 = 0.2;
    double mu = 1.0;  ///< constant drift function mu(t)
    std::vector<double> h_grid{0.0, 0.05, 0.1, 0.15, 0.2};
    std::string output = "power.csv";

    friend bool operator==(const DriftConfig&, const DriftConfig&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, value).second) throw ConfigError("duplicate config key: " + key);
    }
    return kv;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ConfigError(key + ": cannot parse '" + text + "'");
    return value;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<double>(key, trim(item)));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += format_double(v[i]);
    }
    return s;
}

class KeyReader {
public:
    explicit KeyReader(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    template <typename T>
    void number(const char* key, T& target) {
        if (auto it = kv_.find(key); it != kv_.end()) {
            target = parse_number<T>(key, it->second);
            kv_.erase(it);
        }
    }
    void list(const char* key, std::vector<double>& target) {
        if (auto it = kv_.find(key); it != kv_.end()) {
            target = parse_list(key, it->second);
            kv_.erase(it);
        }
    }
    void text(const char* key, std::string& target) {
        if (auto it = kv_.find(key); it != kv_.end()) {
            target = it->second;
            kv_.erase(it);
        }
    }
    void finish() const {
        if (!kv_.empty()) throw ConfigError("unknown config key: " + kv_.begin()->first);
    }

private:
    std::map<std::string, std::string> kv_;
};

inline void validate_split(std::size_t n_total, std::size_t m_n, std::size_t ell_n) {
    if (ell_n < 2 || ell_n % 2 != 0) throw ConfigError("ell_n must be even");
    if (m_n < 2 || m_n % 2 != 0) throw ConfigError("m_n must be even and >= 2");
    if (m_n % ell_n != 0) throw ConfigError("m_n must be a multiple of ell_n");
    if (n_total < m_n + 2) throw ConfigError("n_total must exceed m_n by at least 2");
}

inline void validate_alpha(const char* key, double a) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError(std::string(key) + " must lie in (0, 1)");
}

}  // namespace detail

inline void validate(const ExperimentConfig& c) {
    detail::validate_split(c.n_total, c.m_n, c.ell_n);
    if (c.p < 1) throw ConfigError("p must be >= 1");
    if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
    for (double a : c.alphas) detail::validate_alpha("alpha", a);
    if (c.trials < 1) throw ConfigError("trials must be >= 1");
    if (c.bootstrap_draws < 1) throw ConfigError("B must be >= 1");
}

inline void validate(const DriftConfig& c) {
    detail::validate_split(c.n_total, c.m_n, c.ell_n);
    if (c.p < 1) throw ConfigError("p must be >= 1");
    if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
    detail::validate_alpha("alpha", c.alpha);
    if (c.trials < 1) throw ConfigError("trials must be >= 1");
    if (c.bootstrap_draws < 1) throw ConfigError("B must be >= 1");
    if (c.steps < 1) throw ConfigError("steps must be >= 1");
    if (!(c.varsigma0 >= 0.0)) throw ConfigError("varsigma0 must be >= 0");
    for (double h : c.h_grid)
        if (!(h >= 0.0)) throw ConfigError("h_grid entries must be >= 0");
}

[[nodiscard]] inline ExperimentConfig parse_experiment_config(std::istream& in) {
    detail::KeyReader r(detail::parse_key_values(in));
    ExperimentConfig c;
    std::string dist = "elliptical_t6";
    std::string corr = "ar";
    r.text("distribution", dist);
    r.text("correlation", corr);
    if (dist == "elliptical_t6") c.distribution = Distribution::EllipticalT6;
    else if (dist == "separable_pareto6") c.distribution = Distribution::SeparablePareto6;
    else throw ConfigError("distribution must be elliptical_t6 or separable_pareto6");
    if (corr == "ar") c.correlation = CorrelationKind::Autoregressive;
    else if (corr == "algebraic") c.correlation = CorrelationKind::Algebraic;
    else throw ConfigError("correlation must be ar or algebraic");
    r.number("n_total", c.n_total);
    r.number("m_n", c.m_n);
    r.number("ell_n", c.ell_n);
    r.number("p", c.p);
    r.number("tau", c.tau);
    r.list("alpha", c.alphas);
    r.number("trials", c.trials);
    r.number("B", c.bootstrap_draws);
    r.number("seed", c.seed);
    r.text("output", c.output);
    r.finish();
    validate(c);
    return c;
}

[[nodiscard]] inline DriftConfig parse_drift_config(std::istream& in) {
    detail::KeyReader r(detail::parse_key_values(in));
    DriftConfig c;
    r.number("n_total", c.n_total);
    r.number("m_n", c.m_n);
    r.number("ell_n", c.ell_n);
    r.number("p", c.p);
    r.number("tau", c.tau);
    r.number("alpha", c.alpha);
    r.number("trials", c.trials);
    r.number("B", c.bootstrap_draws);
    r.number("seed", c.seed);
    r.number("steps", c.steps);
    r.number("varsigma0", c.varsigma0);
    r.number("mu", c.mu);
    r.list("h_grid", c.h_grid);
    r.text("output", c.output);
    r.finish();
    validate(c);
    return c;
}

namespace detail {
template <typename Parse>
auto load_file(const std::string& path, Parse parse) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in);
}
}  // namespace detail

[[nodiscard]] inline ExperimentConfig load_config(const std::string& path) {
    return detail::load_file(path, [](std::istream& in) { return parse_experiment_config(in); });
}

[[nodiscard]] inline DriftConfig load_drift_config(const std::string& path) {
    return detail::load_file(path, [](std::istream& in) { return parse_drift_config(in); });
}

[[nodiscard]] inline std::string to_text(const ExperimentConfig& c) {
    std::ostringstream o;
    o << "distribution = " << (c.distribution == Distribution::EllipticalT6 ? "elliptical_t6" : "separable_pareto6") << "\n"
      << "correlation = " << (c.correlation == CorrelationKind::Autoregressive ? "ar" : "algebraic") << "\n"
      << "n_total = " << c.n_total << "\n"
      << "m_n = " << c.m_n << "\n"
      << "ell_n = " << c.ell_n << "\n"
      << "p = " << c.p << "\n"
      << "tau = " << detail::format_double(c.tau) << "\n"
      << "alpha = " << detail::format_list(c.alphas) << "\n"
      << "trials = " << c.trials << "\n"
      << "B = " << c.bootstrap_draws << "\n"
      << "seed = " << c.seed << "\n"
      << "output = " << c.output << "\n";
    return o.str();
}

[[nodiscard]] inline std::string to_text(const DriftConfig& c) {
    std::ostringstream o;
    o << "n_total = " << c.n_total << "\n"
      << "m_n = " << c.m_n << "\n"
      << "ell_n = " << c.ell_n << "\n"
      << "p = " << c.p << "\n"
      << "tau = " << detail::format_double(c.tau) << "\n"
      << "alpha = " << detail::format_double(c.alpha) << "\n"
      << "trials = " << c.trials << "\n"
      << "B = " << c.bootstrap_draws << "\n"
      << "seed = " << c.seed << "\n"
      << "steps = " << c.steps << "\n"
      << "varsigma0 = " << detail::format_double(c.varsigma0) << "\n"
      << "mu = " << detail::format_double(c.mu) << "\n"
      << "h_grid = " << detail::format_list(c.h_grid) << "\n"
      << "output = " << c.output << "\n";
    return o.str();
}

}  // namespace robmax::harness
