#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "llob/common.hpp"
#include "llob/model.hpp"
#include "llob/quad.hpp"
#include "llob/trajectory.hpp"

// Semi-analytic route: the signed density is written as a Green-function
// representation over the price history,
//
//   phi(x,t) = e^{-nu t} (G_0(.,t) * phi_st)(x)
//            + m int_0^{t^T} G_nu(x - x_tau, t - tau) dtau
//            - lam int_0^t erf[(x - x_tau)/sqrt(4 D (t-tau))] e^{-nu (t-tau)} dtau
//
// and the price marches forward as the root of phi(x_t, t) = 0. The initial
// book enters through its exact heat evolution (closed form below); writing
// phi_st(x) e^{-nu t} instead fails the stationarity identity by up to ~30%
// of the local slope around t ~ Tm, which is measurable in the price at first
// order in sqrt(nu).
//
// Quadrature: the sqrt(t - tau) endpoint singularity is removed with the
// substitution w = sqrt(t - tau) on the final panel; older history is
// integrated per recorded interval (piecewise-linear x_tau), with intervals
// far from the endpoint merged geometrically since the integrand smoothness
// scale there is t - tau.

namespace llob::green {

/// Diffusion kernel with memory decay. Mass over x is e^{-nu t} for t > 0.
inline double kernel(const ModelParams& params, double x, double t) {
    if (!(t > 0.0)) return 0.0;
    double d = params.diffusivity();
    return std::exp(-x * x / (4.0 * d * t) - params.nu() * t) /
           std::sqrt(4.0 * M_PI * d * t);
}

/// Quadrature of the kernel mass over [-L, L]; for the hygiene check against
/// the analytic value e^{-nu t}.
inline double kernel_mass(const ModelParams& params, double t, int panels = 64) {
    double l = 8.5 * params.sigma1() * std::sqrt(t);
    return quad::gauss_panels([&](double x) { return kernel(params, x, t); }, -l,
                              l, panels, quad::gl32());
}

/// Exact heat evolution of the stationary book (no decay factor):
/// (G_0(.,t) * phi_st)(x), with phi_st(y) = -(lam/nu) sign(y)(1 - e^{-p|y|}).
inline double heat_smoothed_book(const ModelParams& params, double x, double t) {
    double lam = params.lam(), nu = params.nu(), d = params.diffusivity();
    double p = params.p();
    if (t <= 0.0) return -(lam / nu) * sgn(x) * (1.0 - std::exp(-p * std::abs(x)));
    double s4 = std::sqrt(4.0 * d * t);
    double u = nu * t;  // p^2 d t
    double a = std::erf(x / s4);
    // erfc with exponential prefactors kept in log form to avoid overflow at
    // large u (erfcx would be the natural primitive; compose it from erfc)
    auto exp_erfc = [](double logpre, double z) {
        // e^{logpre} * erfc(z), stable for large positive z
        if (z > 25.0) {
            // erfc(z) ~ e^{-z^2}/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4))
            double zz = z * z;
            double series = 1.0 - 0.5 / zz + 0.75 / (zz * zz);
            return std::exp(logpre - zz) * series / (z * std::sqrt(M_PI));
        }
        return std::exp(logpre) * std::erfc(z);
    };
    double b = 0.5 * (exp_erfc(u - p * x, (2.0 * p * d * t - x) / s4) -
                      exp_erfc(u + p * x, (2.0 * p * d * t + x) / s4));
    return -(lam / nu) * (a - b);
}

/// Discretised past price trajectory x_tau on [0, t], x_0 = 0.
struct PriceHistory {
    std::vector<double> times{0.0};
    std::vector<double> prices{0.0};

    double interp(double tau) const {
        if (tau <= times.front()) return prices.front();
        if (tau >= times.back()) return prices.back();
        std::size_t lo = 0, hi = times.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (times[mid] <= tau ? lo : hi) = mid;
        }
        double f = (tau - times[lo]) / (times[hi] - times[lo]);
        return prices[lo] + f * (prices[hi] - prices[lo]);
    }
};

struct SolveOptions {
    int exec_steps = 192;        ///< time nodes over (0, T]
    double growth = 1.05;        ///< post-execution step growth factor
    double cap_per_tm = 1.0 / 8.0;  ///< post-execution dt cap, units of Tm
    double fixed_point_tol = 1e-6;  ///< nu = 0 fixed-point relative tolerance
    int quad_points = 8;         ///< Gauss points per panel
    bool richardson_check = true;
};

class Solver {
public:
    Solver(const ModelParams& params, const MetaorderSpec& order,
           SolveOptions opts = {})
        : params_(params), order_(order), opts_(opts) {}

    /// Signed density at (x, t) for a given past trajectory. The history must
    /// cover [0, t]; its final node may be the tentative price being solved.
    double phi_at(double x, double t, const PriceHistory& h) const {
        double ic;
        if (params_.infinite()) {
            ic = -params_.liquidity() * x;
        } else {
            ic = std::exp(-params_.nu() * t) * heat_smoothed_book(params_, x, t);
        }
        return ic + order_.rate() * source_integral(x, t, h) -
               params_.lam() * memory_integral(x, t, h);
    }

    /// March the price along t_grid (increasing from 0). For nu = 0 uses the
    /// damped fixed-point form x = (m/L) int G_0; otherwise brackets the root
    /// of phi(x, t) = 0.
    ImpactTrajectory solve_price(const std::vector<double>& t_grid) const {
        require(!t_grid.empty() && t_grid.front() == 0.0,
                "solve_price: t_grid must start at 0");
        PriceHistory h;
        for (std::size_t k = 1; k < t_grid.size(); ++k) {
            require(t_grid[k] > t_grid[k - 1], "solve_price: t_grid must increase");
            advance(h, t_grid[k]);
        }
        ImpactTrajectory traj;
        traj.times = h.times;
        traj.impact = h.prices;
        traj.steps = h.times.size() - 1;
        traj.peak = traj.at(std::min(order_.t, t_grid.back()));
        traj.set_plateau_from_tail(t_grid.back());
        return traj;
    }

    /// Default time grid: uniform over the execution window, then
    /// geometrically growing steps to t_end.
    std::vector<double> default_grid(double t_end) const {
        std::vector<double> g{0.0};
        double dt = order_.t / opts_.exec_steps;
        for (int k = 1; k <= opts_.exec_steps; ++k)
            g.push_back(order_.t * k / opts_.exec_steps);
        double cap = params_.infinite()
                         ? std::max(t_end / 64.0, dt)
                         : opts_.cap_per_tm * params_.memory_time();
        double t = order_.t;
        while (t < t_end - 1e-12 * t_end) {
            dt = std::min(dt * opts_.growth, cap);
            t = std::min(t + dt, t_end);
            g.push_back(t);
        }
        return g;
    }

private:
    void advance(PriceHistory& h, double t) const {
        double x_prev = h.prices.back();
        double x_pred = x_prev;
        if (h.times.size() >= 2) {
            // linear extrapolation from the last two nodes
            std::size_t n = h.times.size();
            double v = (h.prices[n - 1] - h.prices[n - 2]) /
                       (h.times[n - 1] - h.times[n - 2]);
            x_pred = x_prev + v * (t - h.times.back());
        }
        h.times.push_back(t);
        h.prices.push_back(x_pred);
        double x;
        if (params_.infinite()) {
            x = fixed_point(h, t, x_pred);
        } else {
            x = bracket_root(h, t, x_pred);
        }
        h.prices.back() = x;
    }

    // nu = 0: x = (m/L) int_0^{t^T} G_0(x - x_tau, t - tau) dtau, iterated
    // with adaptive damping; the tentative history node tracks the iterate.
    double fixed_point(PriceHistory& h, double t, double x0) const {
        double m = order_.rate(), liq = params_.liquidity();
        double x = x0;
        double omega = 1.0;
        double prev_err = std::numeric_limits<double>::infinity();
        int stalls = 0;
        for (int it = 0; it < 400; ++it) {
            h.prices.back() = x;
            double target = (m / liq) * source_integral(x, t, h);
            double err = std::abs(target - x);
            double scale = std::max({std::abs(x), std::abs(target),
                                     1e-12 * params_.sigma1() * std::sqrt(t)});
            if (err <= opts_.fixed_point_tol * scale) return target;
            if (err > prev_err) {
                if (++stalls > 4) {
                    omega *= 0.5;
                    stalls = 0;
                    if (omega < 1.0 / 64.0)
                        throw numeric_error(
                            "fixed point not contracting at t = " + std::to_string(t));
                }
            }
            prev_err = err;
            x += omega * (target - x);
        }
        throw numeric_error("fixed point: iteration budget exhausted at t = " +
                            std::to_string(t));
    }

    double bracket_root(PriceHistory& h, double t, double x0) const {
        auto f = [&](double x) {
            h.prices.back() = x;
            return phi_at(x, t, h);
        };
        double step = std::max(1e-3 * params_.sigma1() * std::sqrt(std::max(t, order_.t)),
                               0.25 * std::abs(x0 - h.prices[h.prices.size() - 2]) + 1e-14);
        double lo = x0 - step, hi = x0 + step;
        double flo = f(lo), fhi = f(hi);
        int expand = 0;
        while (flo * fhi > 0.0) {
            double width = hi - lo;
            lo -= width;
            hi += width;
            flo = f(lo);
            fhi = f(hi);
            if (++expand > 60)
                throw numeric_error("root bracket not found at t = " + std::to_string(t));
        }
        // Brent
        double a = lo, b = hi, fa = flo, fb = fhi;
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
        double c = a, fc = fa, s = b, fs = fb, d_prev = b - a;
        bool mflag = true;
        for (int it = 0; it < 200 && fb != 0.0; ++it) {
            double tol = 1e-14 * (std::abs(b) + 1.0);
            if (std::abs(b - a) < tol) break;
            if (fa != fc && fb != fc) {
                s = a * fb * fc / ((fa - fb) * (fa - fc)) +
                    b * fa * fc / ((fb - fa) * (fb - fc)) +
                    c * fa * fb / ((fc - fa) * (fc - fb));
            } else {
                s = b - fb * (b - a) / (fb - fa);
            }
            double mid = 0.5 * (a + b);
            bool cond = (s < std::min(mid, b) || s > std::max(mid, b)) ||
                        (mflag && std::abs(s - b) >= 0.5 * std::abs(b - c)) ||
                        (!mflag && std::abs(s - b) >= 0.5 * std::abs(c - d_prev));
            if (cond) {
                s = mid;
                mflag = true;
            } else {
                mflag = false;
            }
            fs = f(s);
            d_prev = c;
            c = b;
            fc = fb;
            if (fa * fs < 0) {
                b = s;
                fb = fs;
            } else {
                a = s;
                fa = fs;
            }
            if (std::abs(fa) < std::abs(fb)) {
                std::swap(a, b);
                std::swap(fa, fb);
            }
        }
        return b;
    }

    // int_0^{min(t,T)} G_nu(x - x_tau, t - tau) dtau with the endpoint
    // singularity (when min(t,T) == t) removed by w = sqrt(t - tau).
    double source_integral(double x, double t, const PriceHistory& h) const {
        double t_up = std::min(t, order_.t);
        if (t_up <= 0.0) return 0.0;
        auto integrand = [&](double tau) {
            return kernel(params_, x - h.interp(tau), t - tau);
        };
        bool singular = t_up >= t - 1e-14 * t;
        double delta = singular ? last_panel_width(h, t) : 0.0;
        double val = panels_graded(integrand, 0.0, t_up - delta, t);
        if (singular) {
            auto fw = [&](double w) {
                double tau = t - w * w;
                return 2.0 * w * kernel(params_, x - h.interp(tau), w * w);
            };
            val += integrate_w(fw, std::sqrt(delta));
        }
        return val;
    }

    // int_0^t erf[(x - x_tau)/sqrt(4D(t - tau))] e^{-nu (t-tau)} dtau
    double memory_integral(double x, double t, const PriceHistory& h) const {
        if (t <= 0.0) return 0.0;
        double d = params_.diffusivity(), nu = params_.nu();
        auto integrand = [&](double tau) {
            double s = t - tau;
            return std::erf((x - h.interp(tau)) / std::sqrt(4.0 * d * s)) *
                   std::exp(-nu * s);
        };
        double delta = last_panel_width(h, t);
        double val = panels_graded(integrand, 0.0, t - delta, t);
        auto fw = [&](double w) {
            double tau = t - w * w;
            return 2.0 * w *
                   std::erf((x - h.interp(tau)) / (std::sqrt(4.0 * d) * w)) *
                   std::exp(-nu * w * w);
        };
        val += integrate_w(fw, std::sqrt(delta));
        return val;
    }

    // Gauss panels over [a, b], graded toward t_ref where the kernel's
    // smoothness scale is t_ref - tau; panel width also respects the
    // trajectory's own scale (~tau, floored at the execution step) and breaks
    // at the execution end where the velocity jumps.
    template <typename F>
    double panels_graded(F&& f, double a, double b, double t_ref) const {
        if (b <= a) return 0.0;
        quad::GaussRule rule = opts_.quad_points >= 16 ? quad::gl16() : quad::gl8();
        double h_min = order_.t / opts_.exec_steps;
        double acc = 0.0;
        double e = b;
        int guard = 0;
        while (e > a + 1e-300 && ++guard < 4000) {
            double width = 0.6 * std::min(std::max(t_ref - e, 0.5 * h_min),
                                          std::max(e, h_min));
            double lo = std::max(a, e - width);
            if (lo < order_.t && e > order_.t) lo = order_.t;  // velocity kink
            acc += quad::gauss(f, lo, e, rule);
            e = lo;
        }
        return acc;
    }

    double last_panel_width(const PriceHistory& h, double t) const {
        std::size_t n = h.times.size();
        double w = n >= 2 ? t - h.times[n - 2] : t;
        w = std::max(w, 1e-12 * t);
        return std::min(w, t);
    }

    template <typename F>
    double integrate_w(F&& fw, double w_hi) const {
        double coarse = quad::gauss_panels(fw, 0.0, w_hi, 4, quad::gl8());
        double fine = quad::gauss_panels(fw, 0.0, w_hi, 8, quad::gl8());
        if (opts_.richardson_check) {
            double scale = std::max(std::abs(fine), 1e-300);
            if (std::abs(fine - coarse) > 1e-4 * scale + 1e-14)
                return quad::gauss_panels(fw, 0.0, w_hi, 32, quad::gl16());
        }
        return fine;
    }

    ModelParams params_;
    MetaorderSpec order_;
    SolveOptions opts_;
};

}  // namespace llob::green
