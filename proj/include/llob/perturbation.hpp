#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "llob/common.hpp"
#include "llob/model.hpp"
#include "llob/quad.hpp"

// First-order-in-sqrt(nu) correction to the price trajectory in rescaled time
// u = nu t. Two weakly singular Volterra problems are solved by forward
// marching with product-integration weights (piecewise-linear unknown, exact
// panel moments against e^{-w} w^{-1/2}):
//
// 1. solve_rescaled_correction: the rescaled equation
//
//      0 = F(u) + beta Int_0^u (sqrt v - sqrt u)/sqrt(pi u v (u-v)) e^v dv
//               + Int_0^u (F(u) - F(v))/sqrt(pi (u-v)) e^v dv
//
//    solved in the equivalent bounded form obtained by multiplying through by
//    e^{-u} and substituting w = u - v (all weights decay like e^{-w}; no
//    overflow for any u_max). The equation is linear in (F, beta), so the
//    solution scales exactly with beta; its plateau is
//
//      F_inf = plateau_per_beta * beta,   plateau_per_beta = 1.4853934...
//
//    a universal constant of the equation. The displayed closed form
//    F(u) = F_inf - (beta/sqrt u)(1 - e^{-u}) reproduces the solved F to a
//    few 1e-3 of F_inf for u >= 3. Matching the permanent-impact
//    normalisation F_inf = (1/2) sigma1 Q / V1 therefore pins
//    beta = 1/(2 * plateau_per_beta), exposed as paper_beta().
//
// 2. solve_exact_kernel_correction: the same first-order reduction carried
//    out with the exact relaxation kernel of the initial book (its heat
//    smoothing replaces the bare e^{-u} decay and turns the restoring slope
//    into erfc(sqrt u), which is what the stationarity identity requires).
//    Its plateau is 1.0 * sigma1 Q / V1 to < 1e-3, matching the direct PDE
//    simulation; kept as the analytic cross-check of the simulated permanent
//    impact.

namespace llob::perturbation {

inline constexpr double sqrt_pi = 1.7724538509055160273;

/// Universal plateau-to-beta ratio of the rescaled equation (measured from
/// the solver itself at n_u = 8192, u_max = 40, Richardson-stable to ~1e-6;
/// the acceptance suite re-derives it).
inline constexpr double plateau_per_beta = 1.4853934;

/// beta reproducing the closed-form normalisation F_inf = (1/2) sigma1 Q/V1.
inline constexpr double paper_beta = 0.5 / plateau_per_beta;

struct PerturbationParams {
    double beta = 1.0;    ///< execution-style constant (dimensionless)
    double u_max = 20.0;  ///< horizon in rescaled time u = nu t
    int n_u = 1024;       ///< grid resolution

    void validate() const {
        require(std::isfinite(beta), "perturbation: beta must be finite");
        require(u_max >= 5.0, "perturbation: u_max must be >= 5");
        require(n_u >= 256, "perturbation: n_u must be >= 256");
    }
};

/// Solution table on the uniform u grid, in units of sigma1 Q / V1.
struct ScaledTrajectory {
    std::vector<double> u;
    std::vector<double> f;
    double beta = 0.0;

    double back() const { return f.back(); }

    /// Plateau estimate: the closed-form approach term is removed at u_max,
    /// which converges much faster than f.back() itself.
    double plateau() const {
        double um = u.back();
        return f.back() + beta * (1.0 - std::exp(-um)) / std::sqrt(um);
    }
};

namespace detail {

// int_a^b e^{-w} w^{-1/2} dw
inline double m0(double a, double b) {
    return sqrt_pi * (std::erf(std::sqrt(b)) - std::erf(std::sqrt(a)));
}

// int_a^b e^{-w} w^{+1/2} dw  via the lower incomplete gamma(3/2, .)
inline double gamma32(double x) {
    return 0.5 * sqrt_pi * std::erf(std::sqrt(x)) - std::sqrt(x) * std::exp(-x);
}

inline double m1(double a, double b) { return gamma32(b) - gamma32(a); }

// B(u) = Int_0^u e^{-w}/sqrt(pi w (u-w)) dw = (2/sqrt(pi)) Int_0^{pi/2}
// exp(-u sin^2 th) dth (smooth; 64-point Gauss is ample for u <= ~1e3).
inline double b_of(double u) {
    auto f = [u](double th) {
        double s = std::sin(th);
        return std::exp(-u * s * s);
    };
    return (2.0 / sqrt_pi) * quad::gauss(f, 0.0, 0.5 * M_PI, quad::gl32());
}

// A(u) = e^{-u} * (the beta integral of the rescaled equation with unit
// amplitude) = erf(sqrt u)/sqrt u - B(u); A(0) = (2 - pi)/sqrt(pi).
inline double a_of(double u) {
    if (u <= 0.0) return (2.0 - M_PI) / sqrt_pi;
    return std::erf(std::sqrt(u)) / std::sqrt(u) - b_of(u);
}

// Forward product-integration march for
//   F(u) * c(u) + Int_0^u e^{-w} (F(u) - F(u-w)) / sqrt(pi w) dw = rhs(u)
// with piecewise-linear F. c(u) is the bare restoring coefficient (e^{-u} for
// the rescaled equation, erfc(sqrt u) for the exact kernel).
template <typename CoefFn, typename RhsFn>
std::vector<double> march(const std::vector<double>& u, CoefFn&& coef,
                          RhsFn&& rhs) {
    std::size_t n = u.size();
    double h = u[1] - u[0];
    std::vector<double> f(n, 0.0);
    std::vector<double> erf_su(n), g32(n);
    for (std::size_t i = 0; i < n; ++i) {
        erf_su[i] = std::erf(std::sqrt(u[i]));
        g32[i] = gamma32(u[i]);
    }
    f[0] = rhs(0, u[0]) / (coef(u[0]) + 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        // kernel term = F_k * erf(sqrt u_k) - Psi_k,
        // Psi_k = Int e^{-w} F(u_k - w)/sqrt(pi w) dw (product weights)
        double psi_known = 0.0;
        double w_fk = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            // panel w in [u_k - u_{j+1}, u_k - u_j]
            double c0 = u[k - j - 1], c1 = u[k - j];  // = u_k - u_{j+1}, u_k - u_j
            double mm0 = sqrt_pi * (erf_su[k - j] - erf_su[k - j - 1]);
            double mm1 = g32[k - j] - g32[k - j - 1];
            double w_hi = (c1 * mm0 - mm1) / (h * sqrt_pi);  // weight of F_{j+1}
            double w_lo = (mm1 - c0 * mm0) / (h * sqrt_pi);  // weight of F_j
            psi_known += w_lo * f[j];
            if (j + 1 == k) {
                w_fk = w_hi;
            } else {
                psi_known += w_hi * f[j + 1];
            }
        }
        double denom = coef(u[k]) + erf_su[k] - w_fk;
        f[k] = (rhs(k, u[k]) + psi_known) / denom;
    }
    return f;
}

}  // namespace detail

/// Solve the rescaled first-order equation for F(u) (units sigma1 Q / V1).
inline ScaledTrajectory solve_rescaled_correction(const PerturbationParams& p) {
    p.validate();
    ScaledTrajectory out;
    out.beta = p.beta;
    out.u.resize(p.n_u + 1);
    double h = p.u_max / p.n_u;
    for (int i = 0; i <= p.n_u; ++i) out.u[i] = h * i;
    auto coef = [](double u) { return std::exp(-u); };
    auto rhs = [&](std::size_t, double u) { return -p.beta * detail::a_of(u); };
    out.f = detail::march(out.u, coef, rhs);
    for (double v : out.f)
        if (!std::isfinite(v))
            throw numeric_error("perturbation: marching produced non-finite values");
    return out;
}

/// Spec name for the rescaled solve.
inline ScaledTrajectory solve_F(const PerturbationParams& p) {
    return solve_rescaled_correction(p);
}

/// First-order correction with the exact relaxation kernel of the initial
/// book. Solves for Z(u) with X(u) = x0(u) + Z(u), x0(u) = 1/(2 sqrt(pi u)):
///   Z erfc(sqrt u) + kernel(Z) = x0(u)[e^{-u} - erfc(sqrt u)] - beta0 A(u),
/// beta0 = 1/(2 sqrt pi). Z(0) = 1/2 exactly; Z(inf) -> ~1.0.
inline ScaledTrajectory solve_exact_kernel_correction(double u_max = 40.0,
                                                      int n_u = 2048) {
    PerturbationParams chk{1.0, u_max, n_u};
    chk.validate();
    ScaledTrajectory out;
    double beta0 = 1.0 / (2.0 * sqrt_pi);
    out.beta = beta0;
    out.u.resize(n_u + 1);
    double h = u_max / n_u;
    for (int i = 0; i <= n_u; ++i) out.u[i] = h * i;
    auto coef = [](double u) { return std::erfc(std::sqrt(u)); };
    auto rhs = [&](std::size_t k, double u) {
        if (k == 0) return 0.5;  // analytic u -> 0 limit of the right side
        double x0 = 1.0 / (2.0 * std::sqrt(M_PI * u));
        return x0 * (std::exp(-u) - std::erfc(std::sqrt(u))) -
               beta0 * detail::a_of(u);
    };
    out.f = detail::march(out.u, coef, rhs);
    return out;
}

/// Analytic permanent-impact constant: F_inf = (1/2) sigma1 Q / V1.
/// sqrt(nu) * f_infinity equals permanent_impact(sigma1, v1, 1/nu, q)
/// identically.
inline double f_infinity(const ModelParams& params, double q) {
    return 0.5 * params.sigma1() * q / params.daily_volume();
}

/// The closed-form approach profile with a given plateau.
inline double closed_form_f(double f_inf, double beta, double u) {
    return f_inf - (beta / std::sqrt(u)) * (1.0 - std::exp(-u));
}

/// Residual of the rescaled equation for the solved (piecewise-linear) F,
/// measured in the bounded e^{-u}-scaled form and evaluated with refined
/// product quadrature at off-grid points, so the check is independent of the
/// marching discretisation. Returns the sup over a dense sample of [u_lo,
/// u_max].
inline double residual_sup(const ScaledTrajectory& sol, double u_lo = 0.1) {
    std::size_t n = sol.u.size();
    double h = sol.u[1] - sol.u[0];
    auto f_at = [&](double uu) {
        double r = uu / h;
        std::size_t i = std::min(static_cast<std::size_t>(r), n - 2);
        double w = r - static_cast<double>(i);
        return sol.f[i] * (1.0 - w) + sol.f[i + 1] * w;
    };
    double worst = 0.0;
    int refine = 6;  // sub-panels per grid cell in the independent quadrature
    for (std::size_t k = 1; k < n; k += std::max<std::size_t>(1, n / 97)) {
        double uk = sol.u[k] - 0.5 * h;  // off-grid evaluation point
        if (uk < u_lo) continue;
        double psi = 0.0;
        int cells = static_cast<int>(std::ceil(uk / h)) * refine;
        double hw = uk / cells;
        for (int j = 0; j < cells; ++j) {
            double a = j * hw, b = a + hw;
            double mm0 = detail::m0(a, b), mm1 = detail::m1(a, b);
            double fa = f_at(uk - a), fb = f_at(uk - b);
            // linear in w on the sub-panel
            double slope = (fb - fa) / (b - a);
            psi += fa * mm0 + slope * (mm1 - a * mm0);
        }
        psi /= sqrt_pi;
        double res = f_at(uk) * (std::exp(-uk) + std::erf(std::sqrt(uk))) - psi +
                     sol.beta * detail::a_of(uk);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

}  // namespace llob::perturbation
