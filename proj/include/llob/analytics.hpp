#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "llob/common.hpp"
#include "llob/fit.hpp"
#include "llob/laws.hpp"
#include "llob/model.hpp"
#include "llob/rng.hpp"

// Stock-universe ingestion and the cross-sectional multiplier pipeline:
// per-stock multipliers, summary statistics, and a cubic fit of M against
// log10 of market cap.

namespace llob::analytics {

struct Universe {
    std::vector<StockRecord> records;
    std::string provenance;
    std::vector<std::string> row_errors;  ///< diagnostics for rejected rows
};

/// Parse a universe CSV with header `ticker,sigma1,adv,mcap`. Malformed rows
/// are collected with line numbers; more than 10% bad rows (or a bad header)
/// is an error.
inline Universe ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("universe file not found: " + path);
    Universe u;
    u.provenance = path;
    std::string line;
    if (!std::getline(in, line)) {
        u.row_errors.push_back("empty file");
        return u;
    }
    // tolerate a UTF-8 BOM and whitespace
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    {
        std::string h;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) h += static_cast<char>(std::tolower(c));
        require(h == "ticker,sigma1,adv,mcap",
                "universe header must be 'ticker,sigma1,adv,mcap', got '" + line + "'");
    }
    std::size_t line_no = 1, total = 0;
    std::vector<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++total;
        std::istringstream ss(line);
        std::string ticker, f1, f2, f3;
        if (!std::getline(ss, ticker, ',') || !std::getline(ss, f1, ',') ||
            !std::getline(ss, f2, ',') || !std::getline(ss, f3)) {
            u.row_errors.push_back("line " + std::to_string(line_no) + ": expected 4 fields");
            continue;
        }
        StockRecord rec;
        rec.ticker = ticker;
        try {
            rec.sigma1 = std::stod(f1);
            rec.v1 = std::stod(f2);
            rec.mcap = std::stod(f3);
            rec.validate();
        } catch (const std::exception& e) {
            u.row_errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }
        bool dup = false;
        for (const auto& r : u.records)
            if (r.ticker == rec.ticker) {
                u.row_errors.push_back("line " + std::to_string(line_no) +
                                       ": duplicate ticker " + rec.ticker);
                dup = true;
                break;
            }
        if (!dup) u.records.push_back(std::move(rec));
    }
    if (total > 0 && u.row_errors.size() * 10 > total)
        throw config_error("universe: more than 10% of rows rejected (" +
                           std::to_string(u.row_errors.size()) + "/" +
                           std::to_string(total) + ")");
    return u;
}

inline void emit_csv(const Universe& u, const std::string& path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write " + path);
    out << "ticker,sigma1,adv,mcap\n";
    out.precision(17);
    for (const auto& r : u.records)
        out << r.ticker << ',' << r.sigma1 << ',' << r.v1 << ',' << r.mcap << '\n';
}

struct MultiplierRow {
    std::string ticker;
    double m = 0.0;
    double log10_mcap = 0.0;
};

/// Exactly one of delta/tm selects the parameterisation.
struct MultiplierMode {
    std::optional<double> delta;
    std::optional<double> tm;

    void validate() const {
        require(delta.has_value() != tm.has_value(),
                "multipliers: give exactly one of delta or tm");
    }
};

inline std::vector<MultiplierRow> multipliers(const Universe& u,
                                              const MultiplierMode& mode) {
    mode.validate();
    std::vector<MultiplierRow> rows;
    rows.reserve(u.records.size());
    for (const auto& r : u.records) {
        MultiplierRow row;
        row.ticker = r.ticker;
        row.m = mode.delta ? gk_multiplier_delta(r, *mode.delta)
                           : gk_multiplier_tm(r, *mode.tm);
        row.log10_mcap = std::log10(r.mcap);
        rows.push_back(std::move(row));
    }
    return rows;
}

struct FitResult {
    std::vector<double> cubic_coeffs;  ///< in log10(mcap), lowest order first
    double residual_std = 0.0;
    double mean_m = 0.0;
    double std_m = 0.0;
    bool non_monotonic = false;  ///< fitted cubic changes direction in range
};

inline FitResult summarize_and_fit(const std::vector<MultiplierRow>& rows) {
    require(rows.size() >= 8, "summarize_and_fit: need >= 8 records for a cubic");
    std::vector<double> x, y;
    x.reserve(rows.size());
    y.reserve(rows.size());
    for (const auto& r : rows) {
        x.push_back(r.log10_mcap);
        y.push_back(r.m);
    }
    fit::PolyFit pf = fit::polynomial(x, y, 3);
    FitResult res;
    res.cubic_coeffs = pf.coeffs;
    res.residual_std = pf.residual_std;
    double s = 0.0, s2 = 0.0;
    for (double v : y) {
        s += v;
        s2 += v * v;
    }
    double n = static_cast<double>(y.size());
    res.mean_m = s / n;
    res.std_m = std::sqrt(std::max(s2 / n - res.mean_m * res.mean_m, 0.0));
    // sign changes of the fitted derivative across the design range
    double lo = *std::min_element(x.begin(), x.end());
    double hi = *std::max_element(x.begin(), x.end());
    auto deriv = [&](double z) {
        return pf.coeffs[1] + 2.0 * pf.coeffs[2] * z + 3.0 * pf.coeffs[3] * z * z;
    };
    int sign0 = sgn(deriv(lo));
    for (int i = 1; i <= 64; ++i) {
        double z = lo + (hi - lo) * i / 64.0;
        if (sgn(deriv(z)) != sign0 && sign0 != 0) {
            res.non_monotonic = true;
            break;
        }
    }
    return res;
}

/// Seeded synthetic universe with Fig.-1-like cross-sectional structure:
/// log-normal market caps, power-law adv-mcap coupling, volatility mildly
/// anticorrelated with size. Clearly synthetic; for pipeline exercise only.
inline Universe synthetic_universe(std::size_t n, std::uint64_t seed) {
    require(n >= 1, "synthetic_universe: n must be >= 1");
    Rng rng(seed);
    Universe u;
    u.provenance = "synthetic(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")";
    u.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // mcap: log10 uniform-ish 8.0 -> 12.0 with normal jitter
        double l10 = 8.0 + 4.0 * rng.uniform() + 0.15 * rng.normal();
        double mcap = std::pow(10.0, l10);
        // adv/mcap rises weakly with size around 1/200
        double ratio = (1.0 / 200.0) * std::pow(mcap / 1e10, 0.10) *
                       std::exp(0.25 * rng.normal());
        // daily vol shrinks weakly with size around 2.5%
        double sigma = 0.025 * std::pow(mcap / 1e10, -0.08) *
                       std::exp(0.20 * rng.normal());
        StockRecord rec;
        rec.ticker = "SYN" + std::to_string(i);
        rec.mcap = mcap;
        rec.v1 = ratio * mcap;
        rec.sigma1 = std::min(sigma, 0.5);
        u.records.push_back(std::move(rec));
    }
    return u;
}

struct CostEstimate {
    double transient_pct = 0.0;  ///< square-root law, percent of price
    double permanent_pct = 0.0;  ///< long-run survivor, percent of price
    std::vector<std::string> notes;
};

/// Both impact figures for an order of Q_currency executed over T days.
/// The transient figure is valid for T << tm; the permanent one is the
/// long-run level. tm defaults to 16 days (the 10% belief threshold at 2.5%
/// daily volatility).
inline CostEstimate cost_estimate(const StockRecord& rec, double q_currency,
                                  double t_days, double y, double tm = 16.0) {
    rec.validate();
    require(t_days > 0.0, "cost_estimate: T must be > 0");
    require(tm > 0.0, "cost_estimate: tm must be > 0");
    CostEstimate ce;
    if (q_currency == 0.0) return ce;
    double v_t = rec.v1 * t_days;
    double part = std::abs(q_currency) / v_t;
    if (part > 0.05)
        ce.notes.push_back("participation " + std::to_string(part) +
                           " above 5%: square-root-law figure is extrapolated");
    ImpactInputs in{y, rec.sigma1 * std::sqrt(t_days), q_currency, v_t};
    ce.transient_pct = 100.0 * square_root_impact(in);
    ce.permanent_pct = 100.0 * permanent_impact(rec.sigma1, rec.v1, tm, q_currency);
    if (!permanent_impact_in_regime(rec.v1, tm, q_currency))
        ce.notes.push_back("order above 5% of memory-horizon volume: permanent "
                           "figure is extrapolated");
    if (t_days > 0.5 * tm)
        ce.notes.push_back("T is not small against tm: transient regime suspect");
    return ce;
}

}  // namespace llob::analytics
