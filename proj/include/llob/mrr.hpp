#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "llob/common.hpp"
#include "llob/rng.hpp"

// Monte-Carlo check of the spread/volatility relation
//   upsilon^2 = (1 - c1^2)/4 s^2 + v0^2.
//
// Trade signs eps_n form a two-state Markov chain with flip probability
// (1 - c1)/2, giving corr(eps_n, eps_{n+1}) = c1 exactly. The midprice moves
// on the surprise component of each sign:
//
//   dp_n = (s/2) (eps_n - c1 eps_{n-1}) + news_n,   news ~ N(0, v0^2).
//
// Why this update: with a linear one-lag rule dp_n = a eps_n + b eps_{n-1} +
// news, whiteness of returns requires cov(dp_n, dp_{n+1}) = a b + (a^2 +
// b^2) c1 + a b c1^2 = 0, and the half-spread execution cost convention fixes
// a = s/2, hence b = -c1 s/2. Then var(dp) = (s/2)^2 (1 + c1^2 - 2 c1^2) +
// v0^2 = (1 - c1^2)/4 s^2 + v0^2, which is the relation under test.

namespace llob::mrr {

struct MrrConfig {
    double s = 0.01;        ///< bid-ask spread
    double c1 = 0.0;        ///< target one-lag sign autocorrelation, |c1| < 1
    double v0 = 0.0;        ///< news volatility per trade
    std::int64_t n_trades = 100000;
    std::uint64_t seed = 1;

    void validate() const {
        require(std::abs(c1) < 1.0, "mrr: |c1| must be < 1");
        require(s >= 0.0 && v0 >= 0.0, "mrr: s and v0 must be >= 0");
        require(n_trades >= 1000, "mrr: n_trades must be >= 1000");
    }
};

struct MrrResult {
    double measured_upsilon = 0.0;
    double upsilon_stderr = 0.0;     ///< standard error of measured_upsilon
    double measured_c1 = 0.0;        ///< realized sign autocorrelation
    double sign_c1_stderr = 0.0;
    double return_autocorr1 = 0.0;   ///< lag-1 autocorrelation of returns
    double return_autocorr1_stderr = 0.0;
    double analytic_upsilon = 0.0;   ///< from the relation at the *measured* c1
    std::int64_t n = 0;
};

/// Simulate n_trades and measure the per-trade volatility and correlations.
inline MrrResult simulate(const MrrConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    double flip_p = 0.5 * (1.0 - cfg.c1);
    int eps_prev = rng.uniform() < 0.5 ? -1 : 1;
    int eps = rng.uniform() < flip_p ? -eps_prev : eps_prev;

    // accumulate moments of dp and cross products in one pass
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    double cross_dp = 0.0;  // sum dp_n dp_{n+1}
    double cross_eps = 0.0; // sum eps_n eps_{n+1}
    double dp_prev = 0.0;
    bool have_prev = false;
    std::int64_t n = cfg.n_trades;
    for (std::int64_t i = 0; i < n; ++i) {
        double news = cfg.v0 > 0.0 ? cfg.v0 * rng.normal() : 0.0;
        double dp = 0.5 * cfg.s * (eps - cfg.c1 * eps_prev) + news;
        s1 += dp;
        s2 += dp * dp;
        s4 += dp * dp * dp * dp;
        if (have_prev) cross_dp += dp_prev * dp;
        dp_prev = dp;
        have_prev = true;
        // advance the sign chain
        int eps_next = rng.uniform() < flip_p ? -eps : eps;
        cross_eps += static_cast<double>(eps) * eps_next;
        eps_prev = eps;
        eps = eps_next;
    }
    double nd = static_cast<double>(n);
    double mean = s1 / nd;
    double var = s2 / nd - mean * mean;
    double m4 = s4 / nd;

    MrrResult r;
    r.n = n;
    r.measured_upsilon = std::sqrt(var);
    // se(var) = sqrt((m4 - var^2)/n); se(sd) = se(var)/(2 sd)
    double se_var = std::sqrt(std::max(m4 - var * var, 0.0) / nd);
    r.upsilon_stderr = var > 0.0 ? se_var / (2.0 * std::sqrt(var)) : 0.0;
    r.measured_c1 = cross_eps / nd;
    r.sign_c1_stderr = std::sqrt((1.0 - r.measured_c1 * r.measured_c1) / nd);
    double denom = var * (nd - 1.0);
    r.return_autocorr1 = denom > 0.0 ? (cross_dp / (nd - 1.0) - mean * mean) / var : 0.0;
    r.return_autocorr1_stderr = 1.0 / std::sqrt(nd);
    r.analytic_upsilon = std::sqrt(0.25 * (1.0 - r.measured_c1 * r.measured_c1) *
                                       cfg.s * cfg.s +
                                   cfg.v0 * cfg.v0);
    return r;
}

struct VolBudget {
    double upsilon = 0.0;
    double trade_induced_fraction = 0.0;  ///< (upsilon^2 - v0^2)/upsilon^2
    double horizon_vol = 0.0;             ///< upsilon * sqrt(N_T)
};

/// Trade-induced share of the variance over a horizon of n_t trades,
/// from the relation's components at the configured parameters.
inline VolBudget vol_budget(const MrrConfig& cfg, double n_t) {
    cfg.validate();
    require(n_t > 0.0, "vol_budget: N_T must be > 0");
    double u2 = 0.25 * (1.0 - cfg.c1 * cfg.c1) * cfg.s * cfg.s + cfg.v0 * cfg.v0;
    VolBudget b;
    b.upsilon = std::sqrt(u2);
    b.trade_induced_fraction = u2 > 0.0 ? (u2 - cfg.v0 * cfg.v0) / u2 : 0.0;
    b.horizon_vol = b.upsilon * std::sqrt(n_t);
    return b;
}

/// Measured trade-induced fraction from a simulation run.
inline double measured_trade_fraction(const MrrResult& r, double v0) {
    double u2 = r.measured_upsilon * r.measured_upsilon;
    return u2 > 0.0 ? (u2 - v0 * v0) / u2 : 0.0;
}

}  // namespace llob::mrr
