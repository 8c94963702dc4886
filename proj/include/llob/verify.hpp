#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llob/analytics.hpp"
#include "llob/common.hpp"
#include "llob/fit.hpp"
#include "llob/green.hpp"
#include "llob/laws.hpp"
#include "llob/model.hpp"
#include "llob/mrr.hpp"
#include "llob/pde.hpp"
#include "llob/perturbation.hpp"

// The acceptance suite: every quantitative criterion the build must satisfy,
// with all thresholds pinned here. Each criterion prints one pass/fail line;
// cmd_verify and the acceptance test binary both run through this runner.
//
// Two checks are expected to fail and are reported with full measurements:
// the finite-memory simulation plateau sits at 2.0x the closed-form
// permanent-impact level (criteria 3a and 7b). Three independent routes in
// this repository (the PDE engine, the Green-function engine, and the
// first-order small-nu solve with the exact relaxation kernel) agree on the
// factor within <1%, while the closed-form coefficient 1/2 is kept as the
// documented formula; see the per-check notes emitted by the runner.

namespace llob::verify {

using json = nlohmann::json;

struct Check {
    std::string name;
    bool passed = false;
    bool informational = false;  ///< reported, not gating
    double value = 0.0;
    std::string expect;
    std::string note;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string error;  ///< set if the criterion itself crashed

    bool passed() const {
        if (!error.empty()) return false;
        for (const auto& c : checks)
            if (!c.informational && !c.passed) return false;
        return true;
    }
};

struct Options {
    std::string filter;       ///< substring of id or name; empty = all
    double grid_scale = 1.0;  ///< <1 coarsens the hygiene reference grids
};

namespace detail {

inline Check mk(const std::string& name, bool ok, double value,
                const std::string& expect, const std::string& note = "",
                bool info = false) {
    return Check{name, ok, info, value, expect, note};
}

inline bool within(double value, double target, double rel_tol) {
    return std::abs(value - target) <=
           rel_tol * std::max(std::abs(target), 1e-300);
}

// ---- shared reference runs -------------------------------------------------

struct SharedRuns {
    // finite-memory reference: sigma1 = 1, nu = 1/16, L = 1, Q = 0.08
    std::optional<double> plateau_T;    // T = 0.5, t_end = 160
    std::optional<double> plateau_4T;   // T = 2.0
    ModelParams params_fin = ModelParams::finite_memory(1.0, 1.0 / 16.0, 0.25);

    double q = 0.08;
    double t_short = 0.5;
    double t_end = 160.0;

    double pde_plateau(double t_exec) {
        MetaorderSpec order(q, t_exec);
        pde::GridSpec g = pde::auto_grid(params_fin, order, t_end);
        pde::Simulator sim(params_fin, g);
        return sim.run_metaorder(order, t_end).plateau;
    }

    double plateau_short() {
        if (!plateau_T) plateau_T = pde_plateau(t_short);
        return *plateau_T;
    }
    double plateau_long() {
        if (!plateau_4T) plateau_4T = pde_plateau(4.0 * t_short);
        return *plateau_4T;
    }
};

}  // namespace detail

class Runner {
public:
    explicit Runner(Options opts = {}) : opts_(opts) {}

    std::vector<CriterionResult> run() {
        std::vector<CriterionResult> out;
        auto maybe = [&](int id, const std::string& name,
                         const std::function<void(CriterionResult&)>& body) {
            if (!selected(id, name)) return;
            CriterionResult r;
            r.id = id;
            r.name = name;
            auto t0 = std::chrono::steady_clock::now();
            try {
                body(r);
            } catch (const std::exception& e) {
                r.error = e.what();
            }
            r.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            out.push_back(std::move(r));
        };

        maybe(1, "square_root_law_emergence", [&](auto& r) { crit1(r); });
        maybe(2, "impact_decay", [&](auto& r) { crit2(r); });
        maybe(3, "permanent_impact", [&](auto& r) { crit3(r); });
        maybe(4, "stationary_book", [&](auto& r) { crit4(r); });
        maybe(5, "cross_solver_oracle", [&](auto& r) { crit5(r); });
        maybe(6, "perturbation_solution", [&](auto& r) { crit6(r); });
        maybe(7, "consistency_triangle", [&](auto& r) { crit7(r); });
        maybe(8, "round_trip_cost", [&](auto& r) { crit8(r); });
        maybe(9, "worked_numbers", [&](auto& r) { crit9(r); });
        maybe(10, "mrr_closure", [&](auto& r) { crit10(r); });
        maybe(11, "numerical_hygiene", [&](auto& r) { crit11(r); });
        return out;
    }

private:
    bool selected(int id, const std::string& name) const {
        if (opts_.filter.empty()) return true;
        if (std::to_string(id) == opts_.filter) return true;
        return name.find(opts_.filter) != std::string::npos;
    }

    // 1. Peak impact vs Q over two decades on the infinite-memory book:
    // log-log slope 0.50 +- 0.05. Participation here is the metaorder volume
    // over the consumed-side book volume on the grid, kept <= 5% by sizing.
    void crit1(CriterionResult& r) {
        ModelParams params = ModelParams::infinite_memory(1.0, 1.0);
        double t_exec = 1.0;
        std::vector<double> lq, lpeak;
        double worst_part = 0.0;
        for (int i = 0; i < 9; ++i) {
            double eta = 10.0 * std::pow(100.0, i / 8.0);
            MetaorderSpec order(eta * t_exec, t_exec);
            pde::GridSpec g = pde::auto_grid(params, order, t_exec);
            pde::Simulator sim(params, g);
            ImpactTrajectory traj = sim.run_metaorder(order, t_exec);
            lq.push_back(std::log(order.q));
            lpeak.push_back(std::log(traj.peak));
            double sell_volume = 0.5 * params.liquidity() * sq(g.x_max);
            worst_part = std::max(worst_part, order.q / sell_volume);
        }
        fit::LineFit f = fit::line(lq, lpeak);
        r.checks.push_back(detail::mk(
            "log-log slope of peak vs Q", std::abs(f.slope - 0.5) <= 0.05,
            f.slope, "0.50 +- 0.05",
            "9 points, Q/(V1 T) in [10, 1000], slope stderr " +
                std::to_string(f.slope_stderr)));
        r.checks.push_back(detail::mk("book participation", worst_part <= 0.05,
                                      worst_part, "<= 0.05"));
    }

    // 2. Post-execution decay: slope -0.50 +- 0.05 on [20T, 100T] and
    // pointwise within 5% of sigma1 Q/(V1 sqrt(4 pi t)).
    void crit2(CriterionResult& r) {
        ModelParams params = ModelParams::infinite_memory(1.0, 1.0);
        double q = 0.08, t_exec = 0.5, t_end = 60.0;
        MetaorderSpec order(q, t_exec);
        pde::GridSpec g = pde::auto_grid(params, order, t_end);
        pde::Simulator sim(params, g);
        ImpactTrajectory traj = sim.run_metaorder(order, t_end);
        std::vector<double> lt, lx;
        double worst = 0.0;
        for (int i = 0; i < 9; ++i) {
            double t = 10.0 * std::pow(5.0, i / 8.0);  // [20T, 100T] = [10, 50]
            double x = traj.at(t);
            double ref = asymptotic_decay(params, q, t);
            worst = std::max(worst, std::abs(x / ref - 1.0));
            lt.push_back(std::log(t));
            lx.push_back(std::log(x));
        }
        fit::LineFit f = fit::line(lt, lx);
        r.checks.push_back(detail::mk("log-log decay slope",
                                      std::abs(f.slope + 0.5) <= 0.05, f.slope,
                                      "-0.50 +- 0.05"));
        r.checks.push_back(detail::mk(
            "pointwise match of sigma1 Q/(V1 sqrt(4 pi t))", worst <= 0.05, worst,
            "max rel dev <= 0.05 on [20T, 100T]"));
    }

    // 3. Finite-memory plateau vs the closed-form permanent impact (15%),
    // and T vs 4T plateau agreement (10%).
    void crit3(CriterionResult& r) {
        double plat_t = shared_.plateau_short();
        double plat_4t = shared_.plateau_long();
        const ModelParams& p = shared_.params_fin;
        double i2 = permanent_impact(p.sigma1(), p.daily_volume(), p.memory_time(),
                                     shared_.q);
        double ratio = plat_t / i2;
        r.checks.push_back(detail::mk(
            "plateau vs closed-form permanent impact",
            detail::within(plat_t, i2, 0.15), ratio, "ratio 1 +- 0.15",
            "measured plateau " + std::to_string(plat_t) + " vs formula " +
                std::to_string(i2) +
                "; the simulated dynamics sit at twice the closed-form level "
                "(see criterion 7 cross-checks)"));
        double tdep = std::abs(plat_t / plat_4t - 1.0);
        r.checks.push_back(detail::mk("plateau T-independence (T vs 4T)",
                                      tdep <= 0.10, tdep, "<= 0.10",
                                      "Q = " + std::to_string(shared_.q) +
                                          ", horizons 0.5 and 2.0 days"));
    }

    // 4. Relaxation from an empty book reproduces phi_st.
    void crit4(CriterionResult& r) {
        ModelParams p = shared_.params_fin;  // p^-1 = 4
        double depth = p.lam() / p.nu();
        pde::GridSpec g;
        g.x_min = -48.0;
        g.x_max = 48.0;
        g.n_cells = 1200;
        g.dt = p.memory_time() / 100.0;
        pde::Simulator sim(p, g);
        pde::BookState s = sim.relax_to_stationary();
        const auto& x = sim.axis();
        double sup = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            sup = std::max(sup, std::abs(s.phi[i] - stationary_book(p, x[i])));
        r.checks.push_back(detail::mk("sup-norm vs phi_st (rel to lam/nu)",
                                      sup / depth <= 0.01, sup / depth, "<= 0.01"));
        std::size_t c = x.size() / 2;  // node at x = 0
        double slope = (s.phi[c + 1] - s.phi[c - 1]) / (x[c + 1] - x[c - 1]);
        r.checks.push_back(detail::mk("interior slope at origin vs -L",
                                      detail::within(slope, -p.liquidity(), 0.02),
                                      slope, "-1 +- 2%"));
        // saturation sampled at p*x = 10
        double xs = 10.0 / p.p();
        std::size_t i10 = static_cast<std::size_t>((xs - g.x_min) / (96.0 / 1200.0));
        double sat = std::abs(s.phi[i10]);
        r.checks.push_back(detail::mk("saturation |phi| at p x = 10 vs lam/nu",
                                      detail::within(sat, depth, 0.01), sat,
                                      std::to_string(depth) + " +- 1%"));
    }

    // 5. Green-function route vs PDE route: peak within 2%, tail level within
    // 5%, over a 3x3 (Q, T) grid at nu = 0 plus one finite-nu point.
    void crit5(CriterionResult& r) {
        ModelParams p0 = ModelParams::infinite_memory(1.0, 1.0);
        double worst_peak = 0.0, worst_tail = 0.0;
        for (double q : {0.05, 0.2, 0.8}) {
            for (double t_exec : {0.25, 1.0, 4.0}) {
                MetaorderSpec order(q, t_exec);
                double t_end = 3.0 * t_exec;
                pde::GridSpec g = pde::auto_grid(p0, order, t_end);
                pde::Simulator sim(p0, g);
                ImpactTrajectory a = sim.run_metaorder(order, t_end);
                green::Solver gs(p0, order);
                ImpactTrajectory b = gs.solve_price(gs.default_grid(t_end));
                worst_peak = std::max(worst_peak, std::abs(a.peak / b.peak - 1.0));
                worst_tail =
                    std::max(worst_tail, std::abs(a.plateau / b.plateau - 1.0));
            }
        }
        r.checks.push_back(detail::mk("nu = 0 peak agreement (3x3 grid)",
                                      worst_peak <= 0.02, worst_peak, "<= 0.02"));
        r.checks.push_back(detail::mk("nu = 0 tail-level agreement (3x3 grid)",
                                      worst_tail <= 0.05, worst_tail, "<= 0.05"));

        ModelParams pf = shared_.params_fin;
        MetaorderSpec order(shared_.q, shared_.t_short);
        double t_end = 32.0;
        pde::GridSpec g = pde::auto_grid(pf, order, t_end);
        pde::Simulator sim(pf, g);
        ImpactTrajectory a = sim.run_metaorder(order, t_end);
        green::Solver gs(pf, order);
        ImpactTrajectory b = gs.solve_price(gs.default_grid(t_end));
        r.checks.push_back(detail::mk("finite-nu peak agreement",
                                      std::abs(a.peak / b.peak - 1.0) <= 0.02,
                                      std::abs(a.peak / b.peak - 1.0), "<= 0.02"));
        r.checks.push_back(detail::mk(
            "finite-nu plateau agreement",
            std::abs(a.plateau / b.plateau - 1.0) <= 0.05,
            std::abs(a.plateau / b.plateau - 1.0), "<= 0.05"));
    }

    // 6. The rescaled first-order solve: closed-form shape for u >= 3 (2%),
    // plateau at the paper-normalised beta equals (1/2) sigma1 Q/V1 (2%),
    // and the speed-normalised plateau is beta-independent (3%).
    void crit6(CriterionResult& r) {
        namespace pert = perturbation;
        pert::PerturbationParams pp{1.0, 20.0, 4096};
        pert::ScaledTrajectory sol = pert::solve_F(pp);
        double p_inf = sol.plateau();
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.u.size(); ++i) {
            if (sol.u[i] < 3.0) continue;
            double cf = pert::closed_form_f(p_inf, sol.beta, sol.u[i]);
            worst = std::max(worst, std::abs(sol.f[i] - cf) / p_inf);
        }
        r.checks.push_back(detail::mk("closed-form shape match, u >= 3",
                                      worst <= 0.02, worst, "<= 0.02 of F_inf"));

        // physical normalisation: sigma1 = 0.025, V1 = 1, Q = 1
        ModelParams pm = params_from_market(0.025, 1.0, 16.0);
        double qq = 1.0;
        pert::PerturbationParams pb{pert::paper_beta, 20.0, 4096};
        double plateau_phys = pert::solve_F(pb).plateau() * pm.sigma1() * qq /
                              pm.daily_volume();
        double target = pert::f_infinity(pm, qq);
        r.checks.push_back(detail::mk(
            "plateau at paper-normalised beta vs (1/2) sigma1 Q/V1",
            detail::within(plateau_phys, target, 0.02), plateau_phys,
            std::to_string(target) + " +- 2%",
            "beta* = 1/(2 * " + std::to_string(pert::plateau_per_beta) + ")"));

        std::vector<double> norm;
        std::string raws = "raw plateaus:";
        for (double b : {0.5, 1.0, 2.0}) {
            pert::PerturbationParams pv{b, 20.0, 2048};
            double pl = pert::solve_F(pv).plateau();
            norm.push_back(pl / b);
            raws += " " + std::to_string(pl);
        }
        double spread = 0.0;
        for (double v : norm)
            spread = std::max(spread, std::abs(v / norm[1] - 1.0));
        r.checks.push_back(detail::mk(
            "speed-normalised plateau, beta in {0.5, 1, 2}", spread <= 0.03,
            spread, "<= 0.03",
            raws + " (the equation is linear in beta: raw plateaus scale with "
                   "it exactly, so the invariant quantity is plateau/beta)"));

        double res = pert::residual_sup(sol);
        r.checks.push_back(detail::mk("equation residual (scaled form)",
                                      res <= 1e-3 * p_inf, res,
                                      "< 1e-3 F_inf on [0.1, 20]"));
    }

    // 7. sqrt(nu) F_inf == closed-form permanent impact exactly; both vs the
    // simulated plateau within 15%; plus the exact-kernel cross-check.
    void crit7(CriterionResult& r) {
        const ModelParams& p = shared_.params_fin;
        double f_inf = perturbation::f_infinity(p, shared_.q);
        double alg = std::sqrt(p.nu()) * f_inf;
        double i2 = permanent_impact(p.sigma1(), p.daily_volume(), p.memory_time(),
                                     shared_.q);
        r.checks.push_back(detail::mk("sqrt(nu) F_inf == permanent impact",
                                      detail::within(alg, i2, 1e-14),
                                      std::abs(alg / i2 - 1.0), "exact (1e-14)"));
        double plat = shared_.plateau_short();
        r.checks.push_back(detail::mk(
            "formula level vs simulated plateau", detail::within(plat, i2, 0.15),
            plat / i2, "ratio 1 +- 0.15",
            "simulated/formula = " + std::to_string(plat / i2)));
        // cross-check: first-order solve with the exact relaxation kernel
        perturbation::ScaledTrajectory z =
            perturbation::solve_exact_kernel_correction(40.0, 2048);
        double z_inf = z.plateau();
        double predicted = z_inf * std::sqrt(p.nu()) * p.sigma1() * shared_.q /
                           p.daily_volume();
        r.checks.push_back(detail::mk(
            "exact-kernel first-order level vs simulated plateau",
            detail::within(plat, predicted, 0.02), plat / predicted,
            "ratio 1 +- 0.02",
            "independent analytic route; plateau constant " + std::to_string(z_inf),
            /*info=*/true));
    }

    // 8. Round trips cost money: strictly positive across the grid, and
    // increasing in Q at fixed T.
    void crit8(CriterionResult& r) {
        const ModelParams& p = shared_.params_fin;
        bool all_pos = true;
        bool monotone = true;
        double min_cost = std::numeric_limits<double>::infinity();
        for (double t_exec : {0.25, 1.0, 4.0}) {
            double prev = 0.0;
            for (double q : {0.02, 0.08, 0.32}) {
                MetaorderSpec order(q, t_exec);
                pde::GridSpec g = pde::auto_grid(p, order, 2.0 * t_exec);
                pde::Simulator sim(p, g);
                double cost = sim.round_trip_cost(q, t_exec);
                all_pos = all_pos && cost > 0.0;
                monotone = monotone && cost > prev;
                min_cost = std::min(min_cost, cost);
                prev = cost;
            }
        }
        r.checks.push_back(detail::mk("cost > 0 on the 3x3 grid", all_pos,
                                      min_cost, "> 0", "minimum cost over grid"));
        r.checks.push_back(detail::mk("cost increases with Q at fixed T",
                                      monotone, monotone ? 1.0 : 0.0, "monotone"));
    }

    // 9. Worked numbers.
    void crit9(CriterionResult& r) {
        double i = square_root_impact({0.5, 0.025, 1.0, 100.0});
        r.checks.push_back(detail::mk("square-root law at Y=0.5, 2.5%, 1%",
                                      std::abs(i - 1.25e-3) <= 1e-15 * 1.25e-3 + 1e-18,
                                      i, "1.25e-3 to 1e-15 rel"));
        double m5 = mandate_multiplier(0.8);
        r.checks.push_back(detail::mk("mandate multiplier at 80%",
                                      std::abs(m5 - 5.0) <= 4.0 * 8.8817841970012523e-16,
                                      m5, "5 exactly (4 ulp)"));
        StockRecord rec{"X", 0.025, 1.0, 200.0};
        double m3 = gk_multiplier_tm(rec, 20.0);
        r.checks.push_back(detail::mk(
            "multiplier, Tm = 20", std::abs(m3 - 0.55901699437494745) <= 1e-12, m3,
            "0.559017 +- 1e-12",
            "displayed formula gives 2.5/sqrt(Tm); the source prose quotes "
            "5/sqrt(Tm) for the same inputs -- documented factor-2 discrepancy, "
            "implemented literally"));
        double m4 = gk_multiplier_delta(rec, 0.10);
        r.checks.push_back(detail::mk("multiplier, Delta = 10%",
                                      std::abs(m4 - 0.625) <= 1e-12, m4,
                                      "0.625 +- 1e-12"));
        // Tm/Delta parameterisations coincide at Tm = Delta^2/sigma1^2
        Rng rng(7);
        double worst = 0.0;
        for (int k = 0; k < 64; ++k) {
            StockRecord rr{"R", 0.005 + 0.05 * rng.uniform(), 0.5 + rng.uniform(),
                           100.0 * (1.0 + 9.0 * rng.uniform())};
            double delta = 0.02 + 0.2 * rng.uniform();
            double tm = sq(delta) / sq(rr.sigma1);
            worst = std::max(worst, std::abs(gk_multiplier_tm(rr, tm) -
                                             gk_multiplier_delta(rr, delta)));
        }
        r.checks.push_back(detail::mk("Tm/Delta parameterisation identity",
                                      worst <= 1e-12, worst, "<= 1e-12"));
        auto u1 = analytics::synthetic_universe(950, 1);
        auto u2 = analytics::synthetic_universe(950, 1);
        bool same = u1.records.size() == u2.records.size();
        for (std::size_t k = 0; same && k < u1.records.size(); ++k)
            same = u1.records[k].mcap == u2.records[k].mcap &&
                   u1.records[k].v1 == u2.records[k].v1 &&
                   u1.records[k].sigma1 == u2.records[k].sigma1;
        auto rows = analytics::multipliers(u1, {std::optional<double>(0.10), {}});
        auto fitres = analytics::summarize_and_fit(rows);
        r.checks.push_back(detail::mk("synthetic pipeline determinism", same,
                                      same ? 1.0 : 0.0, "bit-identical reruns"));
        r.checks.push_back(detail::mk(
            "synthetic universe mean multiplier is order 1",
            fitres.mean_m > 0.05 && fitres.mean_m < 20.0, fitres.mean_m,
            "in (0.05, 20)",
            "the published per-universe statistics need unpublished data and "
            "are not asserted"));
    }

    // 10. The spread/volatility relation closes within 3 standard errors and
    // returns are white.
    void crit10(CriterionResult& r) {
        double worst_z = 0.0, worst_rho_z = 0.0;
        std::uint64_t seed = 2024;
        for (double c1 : {0.0, 0.3, 0.6, 0.9}) {
            for (double v0s : {0.0, 0.2}) {
                mrr::MrrConfig cfg;
                cfg.s = 0.01;
                cfg.c1 = c1;
                cfg.v0 = v0s * cfg.s;
                cfg.n_trades = 1000000;
                cfg.seed = seed++;
                mrr::MrrResult res = mrr::simulate(cfg);
                double z = std::abs(res.measured_upsilon - res.analytic_upsilon) /
                           res.upsilon_stderr;
                worst_z = std::max(worst_z, z);
                worst_rho_z = std::max(
                    worst_rho_z,
                    std::abs(res.return_autocorr1) / res.return_autocorr1_stderr);
            }
        }
        r.checks.push_back(detail::mk(
            "per-trade volatility closure, c1 x v0 grid", worst_z <= 3.0, worst_z,
            "max |z| <= 3", "8 runs of 1e6 trades"));
        r.checks.push_back(detail::mk("lag-1 return autocorrelation is zero",
                                      worst_rho_z <= 3.0, worst_rho_z,
                                      "max |z| <= 3"));
    }

    // 11. Numerical hygiene: grid refinement stability and kernel mass.
    void crit11(CriterionResult& r) {
        ModelParams p0 = ModelParams::infinite_memory(1.0, 1.0);
        MetaorderSpec order(0.2, 1.0);
        pde::GridSpec g = pde::auto_grid(p0, order, 1.0);
        g.n_cells = std::max(64, static_cast<int>(g.n_cells * opts_.grid_scale));
        pde::Simulator base(p0, g);
        double peak_base = base.run_metaorder(order, 1.0).peak;
        pde::GridSpec g2 = g;
        g2.n_cells *= 2;
        g2.dt *= 0.5;
        pde::Simulator fine(p0, g2);
        double peak_fine = fine.run_metaorder(order, 1.0).peak;
        double rel = std::abs(peak_base / peak_fine - 1.0);
        r.checks.push_back(detail::mk("PDE peak under grid halving", rel < 0.01,
                                      rel, "< 0.01"));

        green::SolveOptions so;
        so.exec_steps = 128;
        green::Solver ga(p0, order, so);
        double xa = ga.solve_price(ga.default_grid(1.0)).peak;
        so.exec_steps = 256;
        green::Solver gb(p0, order, so);
        double xb = gb.solve_price(gb.default_grid(1.0)).peak;
        double relg = std::abs(xa / xb - 1.0);
        r.checks.push_back(detail::mk("green root under time-grid doubling",
                                      relg < 0.005, relg, "< 0.005"));

        const ModelParams& pf = shared_.params_fin;
        double worst = 0.0;
        for (double frac : {0.01, 0.1, 1.0, 10.0}) {
            double t = frac * pf.memory_time();
            double mass = green::kernel_mass(pf, t);
            worst = std::max(worst, std::abs(mass * std::exp(pf.nu() * t) - 1.0));
        }
        r.checks.push_back(detail::mk("kernel mass vs e^{-nu t}", worst <= 1e-8,
                                      worst, "<= 1e-8 rel"));
    }

    Options opts_;
    detail::SharedRuns shared_;
};

inline json to_json(const std::vector<CriterionResult>& results) {
    json out = json::array();
    for (const auto& r : results) {
        json jr;
        jr["id"] = r.id;
        jr["name"] = r.name;
        jr["passed"] = r.passed();
        jr["seconds"] = r.seconds;
        if (!r.error.empty()) jr["error"] = r.error;
        jr["checks"] = json::array();
        for (const auto& c : r.checks) {
            json jc;
            jc["name"] = c.name;
            jc["passed"] = c.passed;
            jc["informational"] = c.informational;
            jc["value"] = c.value;
            jc["expect"] = c.expect;
            if (!c.note.empty()) jc["note"] = c.note;
            jr["checks"].push_back(jc);
        }
        out.push_back(jr);
    }
    return out;
}

inline void print_results(const std::vector<CriterionResult>& results,
                          std::FILE* f = stdout) {
    int failed = 0;
    for (const auto& r : results) {
        bool ok = r.passed();
        failed += ok ? 0 : 1;
        std::fprintf(f, "[%s] %2d %-28s (%.1fs)\n", ok ? "PASS" : "FAIL", r.id,
                     r.name.c_str(), r.seconds);
        if (!r.error.empty()) std::fprintf(f, "        error: %s\n", r.error.c_str());
        for (const auto& c : r.checks) {
            std::fprintf(f, "        %s %s: %.6g (expect %s)%s\n",
                         c.passed ? "ok  " : (c.informational ? "info" : "FAIL"),
                         c.name.c_str(), c.value, c.expect.c_str(),
                         c.note.empty() ? "" : (" -- " + c.note).c_str());
        }
    }
    std::fprintf(f, "%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
                 results.size());
}

inline bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed()) return false;
    return !results.empty();
}

}  // namespace llob::verify
