#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "robmax/core.hpp"
#include "robmax/functional.hpp"
#include "robmax/harness/config.hpp"
#include "robmax/inference.hpp"

namespace robmax::harness {

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PairsRecord {
    std::int64_t minute = 0;  ///< minutes since 1970-01-01T00:00
    std::optional<double> price_a;
    std::optional<double> price_b;

    [[nodiscard]] bool complete() const noexcept { return price_a && price_b; }
};

inline constexpr std::size_t kWindowMinutes = 30;

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
T field_number(const std::string& text, std::size_t lineno, const char* what) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw CsvError("line " + std::to_string(lineno) + ": bad " + what + " '" + text + "'");
    return v;
}

}  // namespace detail

/// Parses "YYYY-MM-DDTHH:MM" (a space may replace 'T'; ":00" seconds allowed).
[[nodiscard]] inline std::int64_t parse_minute_timestamp(const std::string& text, std::size_t lineno = 0) {
    auto bad = [&] { return CsvError("line " + std::to_string(lineno) + ": bad timestamp '" + text + "'"); };
    if (text.size() != 16 && !(text.size() == 19 && text.substr(16) == ":00")) throw bad();
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') throw bad();
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, v);
        if (ec != std::errc() || ptr != text.data() + pos + len) throw bad();
        return v;
    };
    const std::chrono::year_month_day ymd{std::chrono::year{num(0, 4)},
                                          std::chrono::month{static_cast<unsigned>(num(5, 2))},
                                          std::chrono::day{static_cast<unsigned>(num(8, 2))}};
    const int hh = num(11, 2);
    const int mm = num(14, 2);
    if (!ymd.ok() || hh > 23 || mm > 59) throw bad();
    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<std::int64_t>(days) * 1440 + hh * 60 + mm;
}

/// Reads a `timestamp,price_a,price_b` CSV. Empty price fields are missing.
[[nodiscard]] inline std::vector<PairsRecord> parse_pairs_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError("pairs CSV is empty");
    if (detail::trim(line) != "timestamp,price_a,price_b")
        throw CsvError("pairs CSV header must be timestamp,price_a,price_b");
    std::vector<PairsRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != 3) throw CsvError("line " + std::to_string(lineno) + ": expected 3 fields");
        PairsRecord r;
        r.minute = parse_minute_timestamp(f[0], lineno);
        if (!out.empty() && r.minute <= out.back().minute)
            throw CsvError("line " + std::to_string(lineno) + ": timestamps must be strictly increasing");
        for (int k = 0; k < 2; ++k) {
            const auto& text = f[1 + k];
            if (text.empty()) continue;
            const double v = detail::field_number<double>(text, lineno, "price");
            if (!(v > 0.0) || !std::isfinite(v))
                throw CsvError("line " + std::to_string(lineno) + ": prices must be positive");
            (k == 0 ? r.price_a : r.price_b) = v;
        }
        out.push_back(r);
    }
    return out;
}

struct PairsIngest {
    std::vector<CurveSample> curves;
    std::size_t complete_windows = 0;    ///< 31-point windows inside gap-free runs
    std::size_t dropped_missing = 0;     ///< alternate windows dropped for a null price
};

/// Splits the series into gap-free runs of consecutive minutes, cuts each run
/// into 30-minute windows sharing endpoints, keeps every other window
/// (1st, 3rd, ...) and turns each fully observed kept window into the curve
/// of 30 log-return differences on the cells (k-1, k]/30.
[[nodiscard]] inline PairsIngest curves_from_records(const std::vector<PairsRecord>& records) {
    PairsIngest out;
    const auto grid = cell_grid(kWindowMinutes);
    std::size_t start = 0;
    while (start < records.size()) {
        std::size_t end = start + 1;
        while (end < records.size() && records[end].minute == records[end - 1].minute + 1) ++end;
        const std::size_t windows = (end - start - 1) / kWindowMinutes;
        out.complete_windows += windows;
        for (std::size_t w = 0; w < windows; w += 2) {
            const std::size_t first = start + w * kWindowMinutes;
            bool ok = true;
            for (std::size_t k = 0; k <= kWindowMinutes && ok; ++k) ok = records[first + k].complete();
            if (!ok) {
                ++out.dropped_missing;
                continue;
            }
            CurveSample c{grid, std::vector<double>(kWindowMinutes)};
            for (std::size_t k = 1; k <= kWindowMinutes; ++k) {
                const auto& prev = records[first + k - 1];
                const auto& cur = records[first + k];
                c.values[k - 1] = std::log(*cur.price_a / *prev.price_a) - std::log(*cur.price_b / *prev.price_b);
            }
            out.curves.push_back(std::move(c));
        }
        start = end;
    }
    return out;
}

[[nodiscard]] inline PairsIngest ingest_pairs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open pairs CSV: " + path);
    return curves_from_records(parse_pairs_csv(in));
}

/// Generic observation CSV: header of coordinate names, one row per observation.
struct DataTable {
    std::vector<std::string> names;
    Matrix values;
};

[[nodiscard]] inline DataTable parse_data_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError("data CSV is empty");
    DataTable t;
    t.names = detail::split_csv_line(line);
    if (t.names.empty()) throw CsvError("data CSV header is empty");
    std::vector<double> flat;
    std::size_t rows = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_csv_line(line);
        if (f.size() != t.names.size())
            throw CsvError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.names.size()) + " fields");
        for (const auto& s : f) flat.push_back(detail::field_number<double>(s, lineno, "value"));
        ++rows;
    }
    t.values = Matrix(rows, t.names.size());
    std::copy(flat.begin(), flat.end(), t.values.data().begin());
    return t;
}

[[nodiscard]] inline DataTable load_data_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open data CSV: " + path);
    return parse_data_csv(in);
}

struct PairsScreenSettings {
    std::size_t p = 50;
    std::size_t ell_n = 10;
    double alpha = 0.10;
    std::size_t bootstrap_draws = 500;
    std::uint64_t seed = 1;
    double tau = 0.9;
};

struct PairsReport {
    std::string label;
    double p_value = 1.0;
    bool reject = false;
    std::size_t n = 0;
    std::size_t m_n = 0;
};

/// Largest multiple of ell_n not above 10% of the curve count.
[[nodiscard]] inline std::size_t pairs_holdout_size(std::size_t curves, std::size_t ell_n) {
    const std::size_t tenth = curves / 10;
    const std::size_t m_n = tenth / ell_n * ell_n;
    if (m_n < ell_n || curves < m_n + 2)
        throw std::invalid_argument("pairs screen: too few curves for one hold-out block (" +
                                    std::to_string(curves) + " curves)");
    return m_n;
}

/// Tests constancy of the mean log-return-difference curve using the
/// coefficients on phi_2 .. phi_{p+1}.
[[nodiscard]] inline PairsReport run_pairs_screen(std::span<const CurveSample> curves, const std::string& label,
                                                  const PairsScreenSettings& s, unsigned threads = 1) {
    PairsReport r;
    r.label = label;
    r.m_n = pairs_holdout_size(curves.size(), s.ell_n);
    r.n = curves.size() - r.m_n;
    FunctionalTestSettings f;
    f.p = s.p;
    f.start_index = 2;
    f.alpha = s.alpha;
    f.bootstrap_draws = s.bootstrap_draws;
    f.seed = s.seed;
    f.ell_n = s.ell_n;
    f.m_n = r.m_n;
    f.tau = s.tau;
    const auto outcome = functional_zero_test(curves, f, threads);
    r.p_value = outcome.p_value;
    r.reject = outcome.reject;
    return r;
}

}  // namespace robmax::harness
