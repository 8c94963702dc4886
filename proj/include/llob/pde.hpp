#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "llob/common.hpp"
#include "llob/laws.hpp"
#include "llob/model.hpp"
#include "llob/trajectory.hpp"

// Direct integration of the signed latent-density equation
//
//   d_t phi = sigma1^2 d_xx phi - nu phi + lam sign(x_t - x)
//             + m delta(x - x_t) 1_{[0,T]}
//
// on a uniform price grid, with the price x_t tracked as the interpolated
// zero crossing of phi. Time stepping is Crank-Nicolson by default (explicit
// Euler selectable, with a CFL guard). Boundaries are Dirichlet, clamped to
// the unperturbed book.

namespace llob::pde {

enum class Scheme { crank_nicolson, explicit_euler };

struct GridSpec {
    double x_min;
    double x_max;
    int n_cells;   ///< number of cells; nodes = n_cells + 1
    double dt;     ///< base execution time step, days
    Scheme scheme = Scheme::crank_nicolson;

    double dx() const { return (x_max - x_min) / n_cells; }

    void validate(const ModelParams& params) const {
        require(x_max > x_min, "grid: x_max must exceed x_min");
        require(n_cells >= 64, "grid: n_cells must be >= 64");
        require(dt > 0.0 && std::isfinite(dt), "grid: dt must be > 0");
        if (scheme == Scheme::explicit_euler) {
            double cfl = params.diffusivity() * dt / sq(dx());
            require(cfl <= 0.5,
                    "grid: explicit scheme violates the CFL bound, "
                    "sigma1^2 dt/dx^2 = " + std::to_string(cfl) + " > 0.5");
        }
    }
};

/// Discretised signed latent density plus the tracked price.
struct BookState {
    std::vector<double> phi;  ///< node values, volume per price unit
    double x_t = 0.0;
    double t = 0.0;
};

class Simulator {
public:
    Simulator(const ModelParams& params, const GridSpec& grid)
        : params_(params), grid_(grid) {
        grid.validate(params);
        nodes_ = grid.n_cells + 1;
        dx_ = grid.dx();
        x_.resize(nodes_);
        for (int i = 0; i < nodes_; ++i) x_[i] = grid.x_min + i * dx_;
    }

    const std::vector<double>& axis() const { return x_; }
    const ModelParams& params() const { return params_; }
    const GridSpec& grid() const { return grid_; }

    /// Unperturbed book profile: phi_st for nu > 0, the linear book for nu = 0.
    double book_profile(double x) const {
        return params_.infinite() ? -params_.liquidity() * x
                                  : stationary_book(params_, x);
    }

    /// State with the unperturbed book and the price at 0.
    BookState initial_state() const {
        BookState s;
        s.phi.resize(nodes_);
        for (int i = 0; i < nodes_; ++i) s.phi[i] = book_profile(x_[i]);
        s.x_t = 0.0;
        s.t = 0.0;
        return s;
    }

    /// Advance one step. source_rate is the metaorder rate m (0 outside the
    /// execution window); the volume m*dt is deposited along the price path
    /// predicted from the current price velocity estimate.
    void step(BookState& s, double dt, double source_rate) const {
        std::vector<double> rhs(nodes_);
        build_rhs(s, dt, source_rate, rhs);
        if (grid_.scheme == Scheme::crank_nicolson) {
            solve_cn(dt, rhs, s.phi);
        } else {
            s.phi = std::move(rhs);  // fully explicit update already applied
        }
        double x_prev = s.x_t;
        s.t += dt;
        update_price(s);
        last_velocity_ = (s.x_t - x_prev) / dt;
    }

    /// Evolve from phi = 0 to the stationary book. Converged when the
    /// sup-norm change per memory time drops below 1e-6 * lam/nu.
    BookState relax_to_stationary() const {
        require(!params_.infinite(), "relax_to_stationary: requires nu > 0");
        BookState s;
        s.phi.assign(nodes_, 0.0);
        s.x_t = 0.0;
        double tm = params_.memory_time();
        double depth = params_.lam() / params_.nu();
        double dt = grid_.dt;
        double t_max = 50.0 * tm;
        std::vector<double> prev;
        double check_every = tm;
        double next_check = check_every;
        prev = s.phi;
        while (s.t < t_max) {
            step(s, dt, 0.0);
            if (s.t >= next_check) {
                double dsup = 0.0;
                for (int i = 0; i < nodes_; ++i)
                    dsup = std::max(dsup, std::abs(s.phi[i] - prev[i]));
                if (dsup < 1e-6 * depth) return s;
                prev = s.phi;
                next_check += check_every;
            }
        }
        throw numeric_error("relax_to_stationary: no convergence within 50 Tm");
    }

    /// Run a metaorder from the unperturbed book and record the impact path.
    /// Records are kept at every step; t lands exactly on T and t_end.
    ImpactTrajectory run_metaorder(const MetaorderSpec& order, double t_end,
                                   bool adaptive_exec = true) const {
        require(t_end >= order.t, "run_metaorder: t_end must be >= T");
        BookState s = initial_state();
        ImpactTrajectory traj;
        traj.times.push_back(0.0);
        traj.impact.push_back(0.0);
        run_phase(s, order.rate(), 0.0, order.t, adaptive_exec, traj);
        traj.peak = s.x_t;
        if (t_end > order.t) run_phase(s, 0.0, order.t, t_end, false, traj);
        traj.set_plateau_from_tail(t_end);
        return traj;
    }

    /// Buy Q over T, then sell Q over T. Returns cash paid minus cash
    /// received, computed from the execution prices along the trajectory.
    double round_trip_cost(double q, double t_exec) const {
        MetaorderSpec buy(q, t_exec);
        BookState s = initial_state();
        ImpactTrajectory traj;
        traj.times.push_back(0.0);
        traj.impact.push_back(0.0);
        double m = buy.rate();
        double cash = 0.0;
        auto charge = [&](double rate, double t0, double t1) {
            // trapezoid in the recorded trajectory over [t0, t1]
            for (std::size_t i = 1; i < traj.times.size(); ++i) {
                double a = traj.times[i - 1], b = traj.times[i];
                if (b <= t0 || a >= t1) continue;
                double xa = traj.impact[i - 1], xb = traj.impact[i];
                cash += rate * 0.5 * (xa + xb) * (b - a);
            }
        };
        run_phase(s, m, 0.0, t_exec, true, traj);
        charge(m, 0.0, t_exec);
        std::size_t mark = traj.times.size();
        run_phase(s, -m, t_exec, 2.0 * t_exec, true, traj);
        // charge the sell leg with its own sign: received cash enters negatively
        for (std::size_t i = mark; i < traj.times.size(); ++i) {
            double a = traj.times[i - 1], b = traj.times[i];
            cash -= m * 0.5 * (traj.impact[i - 1] + traj.impact[i]) * (b - a);
        }
        return cash;
    }

private:
    void run_phase(BookState& s, double rate, double t_from, double t_to,
                   bool adaptive, ImpactTrajectory& traj) const {
        double dt = grid_.dt;
        if (adaptive && rate != 0.0) dt = std::min(dt, 1e-5 * (t_to - t_from));
        double growth_cap = post_exec_cap();
        while (s.t < t_to - 1e-12 * t_to) {
            double step_dt = std::min(dt, t_to - s.t);
            step(s, step_dt, rate);
            traj.times.push_back(s.t);
            traj.impact.push_back(s.x_t);
            ++traj.steps;
            if (adaptive && rate != 0.0) {
                // limit price motion to ~0.6 cells per step while ramping up
                double v = std::abs(last_velocity_);
                double dt_target = v > 0.0 ? 0.6 * dx_ / v : 2.0 * dt;
                dt = std::clamp(std::min(1.5 * dt, dt_target), 1e-5 * (t_to - t_from),
                                grid_.dt);
            } else if (rate == 0.0) {
                dt = std::min(1.05 * dt, growth_cap);
            }
        }
    }

    double post_exec_cap() const {
        if (!params_.infinite()) return params_.memory_time() / 16.0;
        return 64.0 * grid_.dt;
    }

    // Assemble the right-hand side: explicit half (or full) step of diffusion
    // and decay, the cell-averaged sign source, and the metaorder deposit.
    void build_rhs(const BookState& s, double dt, double source_rate,
                   std::vector<double>& rhs) const {
        double d = params_.diffusivity();
        double nu = params_.nu();
        double lam = params_.lam();
        double w = grid_.scheme == Scheme::crank_nicolson ? 0.5 : 1.0;
        double r = d * dt * w / sq(dx_);
        const std::vector<double>& phi = s.phi;
        // Dirichlet: edges clamped to the unperturbed book
        rhs[0] = book_profile(x_[0]);
        rhs[nodes_ - 1] = book_profile(x_[nodes_ - 1]);
        for (int i = 1; i < nodes_ - 1; ++i) {
            rhs[i] = phi[i] + r * (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) -
                     nu * dt * w * phi[i];
        }
        if (lam != 0.0) {
            // sign(x_t - x) averaged over each node's dual cell, so the
            // deposition front moves smoothly with the price
            for (int i = 1; i < nodes_ - 1; ++i) {
                double f = std::clamp((s.x_t - (x_[i] - 0.5 * dx_)) / dx_, 0.0, 1.0);
                rhs[i] += dt * lam * (2.0 * f - 1.0);
            }
        }
        if (source_rate != 0.0) {
            deposit(rhs, source_rate * dt, s.x_t,
                    s.x_t + last_velocity_ * dt);
        }
    }

    // Deposit a volume along the segment [xa, xb] (the price path covered
    // during the step), split into node dual cells.
    void deposit(std::vector<double>& rhs, double volume, double xa,
                 double xb) const {
        if (xb < xa) std::swap(xa, xb);
        double lo_ok = x_[1] - 0.49 * dx_, hi_ok = x_[nodes_ - 2] + 0.49 * dx_;
        xa = std::clamp(xa, lo_ok, hi_ok);
        xb = std::clamp(xb, lo_ok, hi_ok);
        if (xb - xa < 1e-12 * dx_) {
            int i = static_cast<int>(std::floor((xa - x_[0]) / dx_));
            i = std::clamp(i, 1, nodes_ - 3);
            double th = (xa - x_[i]) / dx_;
            rhs[i] += volume * (1.0 - th) / dx_;
            rhs[i + 1] += volume * th / dx_;
            return;
        }
        double dens = volume / (xb - xa);
        int i0 = static_cast<int>(std::floor((xa - x_[0]) / dx_ + 0.5));
        int i1 = static_cast<int>(std::floor((xb - x_[0]) / dx_ + 0.5));
        for (int i = std::max(i0, 1); i <= std::min(i1, nodes_ - 2); ++i) {
            double lo = std::max(xa, x_[i] - 0.5 * dx_);
            double hi = std::min(xb, x_[i] + 0.5 * dx_);
            if (hi > lo) rhs[i] += dens * (hi - lo) / dx_;
        }
    }

    // Thomas solve of (I - w dt A) phi_new = rhs with Dirichlet rows.
    void solve_cn(double dt, std::vector<double>& rhs,
                  std::vector<double>& phi) const {
        double r = params_.diffusivity() * dt * 0.5 / sq(dx_);
        double diag = 1.0 + 2.0 * r + params_.nu() * dt * 0.5;
        int n = nodes_;
        scratch_.resize(n);
        std::vector<double>& c = scratch_;
        // forward sweep; row 0 and n-1 are identity (Dirichlet)
        c[0] = 0.0;
        double beta = 1.0;
        phi[0] = rhs[0];
        double prev_c = 0.0;
        for (int i = 1; i < n - 1; ++i) {
            beta = diag - (-r) * prev_c;
            c[i] = (-r) / beta;
            phi[i] = (rhs[i] + r * phi[i - 1]) / beta;
            prev_c = c[i];
        }
        phi[n - 1] = rhs[n - 1];
        for (int i = n - 2; i >= 1; --i) phi[i] -= c[i] * phi[i + 1];
    }

    // Interpolated zero crossing (+ to -), nearest to the previous price.
    void update_price(BookState& s) const {
        const std::vector<double>& phi = s.phi;
        double best = 0.0;
        double best_dist = std::numeric_limits<double>::infinity();
        bool found = false;
        for (int i = 0; i < nodes_ - 1; ++i) {
            if (phi[i] > 0.0 && phi[i + 1] <= 0.0) {
                double d = phi[i] - phi[i + 1];
                double xc = d > 0.0 ? x_[i] + dx_ * phi[i] / d : x_[i] + 0.5 * dx_;
                double dist = std::abs(xc - s.x_t);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = xc;
                    found = true;
                }
            }
        }
        if (!found) {
            bool all_zero = true;
            for (int i = 0; i < nodes_; ++i)
                if (phi[i] != 0.0) { all_zero = false; break; }
            if (all_zero) return;  // empty book: price pinned (relaxation start)
            throw numeric_error(
                "zero crossing lost at t = " + std::to_string(s.t) +
                " (metaorder too violent for this grid); price was " +
                std::to_string(s.x_t));
        }
        if (best < x_[0] + 2.0 * dx_ || best > x_[nodes_ - 1] - 2.0 * dx_)
            throw numeric_error(
                "price reached the domain edge at t = " + std::to_string(s.t) +
                " (x_t = " + std::to_string(best) +
                "); the grid is too small for this metaorder");
        s.x_t = best;
    }

    ModelParams params_;
    GridSpec grid_;
    int nodes_ = 0;
    double dx_ = 0.0;
    std::vector<double> x_;
    mutable std::vector<double> scratch_;
    mutable double last_velocity_ = 0.0;
};

/// Grid sized for a metaorder run: resolves the execution scale sigma1*sqrt(T)
/// and, for fast runs, the front boundary layer; the domain keeps edges
/// causally irrelevant and the consumed-side book volume at least
/// 1/max_participation times |Q|.
inline GridSpec auto_grid(const ModelParams& params, const MetaorderSpec& order,
                          double t_end, double max_participation = 0.05) {
    double d = params.diffusivity();
    double s1 = params.sigma1();
    double t_exec = order.t;
    double liq = params.liquidity();
    double eta = std::abs(order.rate()) / params.daily_volume();
    double alpha_est = std::sqrt(2.0 * eta);  // fast-regime front position scale
    double peak_est = std::max(alpha_est, eta / std::sqrt(M_PI)) *
                      std::sqrt(d * t_exec);
    double diff_reach;
    if (params.infinite()) {
        diff_reach = 8.0 * s1 * std::sqrt(t_end);
    } else {
        double horizon = std::min(t_end, 5.0 * params.memory_time());
        diff_reach = 8.0 * std::max(1.0 / params.p(), s1 * std::sqrt(horizon));
    }
    // consumed-side volume >= |Q| / max_participation
    double need = std::sqrt(2.0 * std::abs(order.q) / (max_participation * liq));
    double ahead = std::max(peak_est + diff_reach, need);
    double behind = diff_reach + 2.0 * s1 * std::sqrt(t_exec);
    double lo = order.q >= 0.0 ? -behind : -ahead;
    double hi = order.q >= 0.0 ? ahead : behind;

    // resolve both the execution diffusion scale and, for fast runs, the
    // front boundary layer (width ~ 2 sqrt(D t)/alpha)
    double dx = s1 * std::sqrt(t_exec) *
                std::min(1.0 / 40.0, 0.08 / std::max(alpha_est, 1e-9));
    if (!params.infinite()) dx = std::min(dx, 1.0 / (20.0 * params.p()));

    GridSpec g;
    g.x_min = lo;
    g.x_max = hi;
    g.n_cells = std::max(64, static_cast<int>(std::ceil((hi - lo) / dx)));
    g.dt = t_exec / 512.0;
    return g;
}

}  // namespace llob::pde
