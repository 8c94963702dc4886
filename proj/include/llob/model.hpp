#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "llob/common.hpp"

namespace llob {

/// Price-unit convention carried through run metadata. "absolute" means prices
/// in currency; "relative" means price displacement as a fraction and
/// volatility as fraction per sqrt(day). All formulas are mode-agnostic.
enum class UnitMode { absolute, relative };

inline std::string to_string(UnitMode m) {
    return m == UnitMode::absolute ? "absolute" : "relative";
}

inline UnitMode unit_mode_from_string(const std::string& s) {
    if (s == "absolute") return UnitMode::absolute;
    if (s == "relative") return UnitMode::relative;
    throw config_error("unknown unit mode '" + s + "' (absolute|relative)");
}

/// Latent-book model parameters. sigma1: daily volatility (price units per
/// sqrt(day)); nu: cancellation/memory-renewal rate (1/day); lam: deposition
/// intensity (volume per price unit per day).
///
/// nu = 0 encodes the infinite-memory limit (nu, lam -> 0 at fixed book slope
/// L); in that limit lam/nu is indeterminate, so L must be supplied
/// explicitly. Finite-memory operations reject nu = 0.
class ModelParams {
public:
    static ModelParams finite_memory(double sigma1, double nu, double lam) {
        require(sigma1 > 0.0 && std::isfinite(sigma1), "sigma1 must be > 0");
        require(nu > 0.0 && std::isfinite(nu), "finite_memory requires nu > 0");
        require(lam >= 0.0 && std::isfinite(lam), "lam must be >= 0");
        return ModelParams(sigma1, nu, lam, lam / std::sqrt(nu * sigma1 * sigma1));
    }

    /// nu, lam -> 0 keeping the book slope (liquidity) fixed.
    static ModelParams infinite_memory(double sigma1, double liquidity) {
        require(sigma1 > 0.0 && std::isfinite(sigma1), "sigma1 must be > 0");
        require(liquidity > 0.0 && std::isfinite(liquidity), "liquidity must be > 0");
        return ModelParams(sigma1, 0.0, 0.0, liquidity);
    }

    double sigma1() const { return sigma1_; }
    double nu() const { return nu_; }
    double lam() const { return lam_; }

    bool infinite() const { return nu_ == 0.0; }

    /// Book slope near the price: L = lam / sqrt(nu sigma1^2).
    double liquidity() const { return liq_; }

    /// Daily traded volume V1 = sigma1^2 * L.
    double daily_volume() const { return sigma1_ * sigma1_ * liq_; }

    /// Memory time Tm = 1/nu (infinite when nu = 0).
    double memory_time() const {
        return nu_ > 0.0 ? 1.0 / nu_ : std::numeric_limits<double>::infinity();
    }

    /// Inverse book length scale p = sqrt(nu/sigma1^2) (0 when nu = 0).
    double p() const { return std::sqrt(nu_) / sigma1_; }

    /// Diffusivity of reservation prices; D = sigma1^2 throughout.
    double diffusivity() const { return sigma1_ * sigma1_; }

private:
    ModelParams(double s, double n, double l, double liq)
        : sigma1_(s), nu_(n), lam_(l), liq_(liq) {}

    double sigma1_;
    double nu_;
    double lam_;
    double liq_;
};

/// Quantities derived from ModelParams.
struct DerivedQuantities {
    double liquidity;     ///< L
    double daily_volume;  ///< V1 = sigma1^2 L
    double memory_time;   ///< Tm = 1/nu (inf at nu = 0)
    double p;             ///< sqrt(nu)/sigma1 (0 at nu = 0)
};

inline DerivedQuantities derive(const ModelParams& params) {
    return {params.liquidity(), params.daily_volume(), params.memory_time(),
            params.p()};
}

/// Inverts the derived-quantity map: market observables (sigma1, V1, Tm)
/// to (sigma1, nu, lam). Round-trips through derive() to ~1e-15 relative.
inline ModelParams params_from_market(double sigma1, double v1, double tm) {
    require(sigma1 > 0.0 && std::isfinite(sigma1), "sigma1 must be > 0");
    require(v1 > 0.0 && std::isfinite(v1), "v1 must be > 0");
    require(tm > 0.0 && std::isfinite(tm), "tm must be positive and finite");
    double nu = 1.0 / tm;
    double liq = v1 / (sigma1 * sigma1);
    double lam = liq * sigma1 * std::sqrt(nu);
    return ModelParams::finite_memory(sigma1, nu, lam);
}

/// Execution instruction: signed volume Q over horizon T days; rate m = Q/T.
struct MetaorderSpec {
    double q;  ///< signed volume; sign sets the side
    double t;  ///< execution horizon, days

    MetaorderSpec(double q_, double t_) : q(q_), t(t_) {
        require(t > 0.0 && std::isfinite(t), "metaorder horizon T must be > 0");
        require(std::isfinite(q / t), "metaorder rate m = Q/T must be finite");
    }

    double rate() const { return q / t; }
};

/// Per-asset inputs of the multiplier calculators.
struct StockRecord {
    std::string ticker;
    double sigma1;  ///< daily volatility, fraction/day
    double v1;      ///< average daily traded value, currency/day
    double mcap;    ///< market capitalisation, currency

    void validate() const {
        require(sigma1 > 0.0 && std::isfinite(sigma1),
                ticker + ": sigma1 must be > 0");
        require(v1 > 0.0 && std::isfinite(v1), ticker + ": adv must be > 0");
        require(mcap > 0.0 && std::isfinite(mcap), ticker + ": mcap must be > 0");
    }
};

}  // namespace llob
