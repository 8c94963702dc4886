// llob command-line laboratory: simulations, sweeps, cross-sectional
// multiplier analytics, spread/volatility Monte Carlo, and the acceptance
// verification matrix.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "llob/analytics.hpp"
#include "llob/common.hpp"
#include "llob/fit.hpp"
#include "llob/green.hpp"
#include "llob/io.hpp"
#include "llob/laws.hpp"
#include "llob/model.hpp"
#include "llob/mrr.hpp"
#include "llob/pde.hpp"
#include "llob/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace llob;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = "out";
};

io::Config load_config(const CommonArgs& a, bool required = true) {
    io::Config cfg;
    if (!a.config_path.empty()) {
        cfg = io::Config::from_file(a.config_path);
    } else if (required) {
        throw config_error("no config file given (use --config)");
    }
    cfg.apply_overrides(a.overrides);
    return cfg;
}

fs::path prep_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw config_error("cannot create output directory " + dir);
    return p;
}

pde::GridSpec grid_from_config(const io::Config& cfg, const ModelParams& params,
                               const MetaorderSpec& order, double t_end) {
    if (cfg.has("grid.x_min") || cfg.has("grid.n_cells")) {
        pde::GridSpec g;
        g.x_min = cfg.get_num("grid.x_min");
        g.x_max = cfg.get_num("grid.x_max");
        g.n_cells = static_cast<int>(cfg.get_int("grid.n_cells", 0));
        g.dt = cfg.get_num("grid.dt", order.t / 512.0);
        std::string scheme = cfg.get_str("grid.scheme", "cn");
        if (scheme == "explicit") g.scheme = pde::Scheme::explicit_euler;
        else if (scheme != "cn")
            throw config_error("grid.scheme must be cn or explicit");
        return g;
    }
    return pde::auto_grid(params, order, t_end);
}

json run_metadata(const io::Config& cfg, const ModelParams& params,
                  const std::string& engine) {
    json meta;
    meta["engine"] = engine;
    meta["unit_mode"] = cfg.get_str("model.mode", "relative");
    meta["params"] = io::params_echo(params);
    meta["config"] = cfg.echo();
    return meta;
}

int cmd_simulate(const CommonArgs& args, const std::string& engine) {
    io::Config cfg = load_config(args);
    ModelParams params = io::model_from_config(cfg);
    MetaorderSpec order(cfg.get_num("metaorder.q"), cfg.get_num("metaorder.t"));
    double t_end = cfg.get_num("metaorder.t_end", order.t);
    fs::path out = prep_out_dir(args.out_dir);

    ImpactTrajectory traj;
    json meta = run_metadata(cfg, params, engine);
    if (engine == "pde") {
        pde::GridSpec g = grid_from_config(cfg, params, order, t_end);
        pde::Simulator sim(params, g);
        traj = sim.run_metaorder(order, t_end);
        meta["grid"] = {{"x_min", g.x_min},
                        {"x_max", g.x_max},
                        {"n_cells", g.n_cells},
                        {"dt", g.dt},
                        {"scheme", g.scheme == pde::Scheme::crank_nicolson
                                       ? "cn"
                                       : "explicit"}};
    } else if (engine == "green") {
        green::SolveOptions so;
        so.exec_steps = static_cast<int>(cfg.get_int("green.exec_steps", 192));
        green::Solver solver(params, order, so);
        traj = solver.solve_price(solver.default_grid(t_end));
        meta["green"] = {{"exec_steps", so.exec_steps}, {"growth", so.growth}};
    } else {
        throw config_error("--engine must be pde or green");
    }
    meta["metaorder"] = {{"q", order.q}, {"t", order.t}, {"t_end", t_end}};
    meta["result"] = {{"peak", traj.peak},
                      {"plateau", traj.plateau},
                      {"steps", traj.steps}};
    io::write_trajectory_csv(traj, (out / "trajectory.csv").string());
    io::write_json(meta, (out / "trajectory.meta.json").string());
    std::printf("wrote %s (peak %.6g, plateau %.6g, %zu steps)\n",
                (out / "trajectory.csv").c_str(), traj.peak, traj.plateau,
                traj.steps);
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    io::Config cfg = load_config(args);
    ModelParams params = io::model_from_config(cfg);
    std::string axis = cfg.get_str("sweep.axis", "q");
    int points = static_cast<int>(cfg.get_int("sweep.points", 9));
    if (points < 6) throw config_error("sweep.points must be >= 6");
    double target = cfg.get_num("sweep.target_slope", axis == "q" ? 0.5 : -0.5);
    double tol = cfg.get_num("sweep.tolerance", 0.05);
    fs::path out = prep_out_dir(args.out_dir);

    std::vector<double> lx, ly;
    json pts = json::array();
    if (axis == "q") {
        double q_min = cfg.get_num("sweep.q_min");
        double q_max = cfg.get_num("sweep.q_max");
        require(q_max / q_min >= 99.0, "sweep: Q range must span >= 2 decades");
        double t_exec = cfg.get_num("metaorder.t");
        for (int i = 0; i < points; ++i) {
            double q = q_min * std::pow(q_max / q_min,
                                        static_cast<double>(i) / (points - 1));
            MetaorderSpec order(q, t_exec);
            pde::GridSpec g = pde::auto_grid(params, order, t_exec);
            pde::Simulator sim(params, g);
            ImpactTrajectory traj = sim.run_metaorder(order, t_exec);
            lx.push_back(std::log(q));
            ly.push_back(std::log(traj.peak));
            pts.push_back({{"q", q}, {"peak", traj.peak}});
        }
    } else if (axis == "decay_time") {
        MetaorderSpec order(cfg.get_num("metaorder.q"), cfg.get_num("metaorder.t"));
        double t_lo = cfg.get_num("sweep.t_lo", 20.0 * order.t);
        double t_hi = cfg.get_num("sweep.t_hi", 100.0 * order.t);
        require(t_hi > t_lo, "sweep: need t_hi > t_lo");
        pde::GridSpec g = pde::auto_grid(params, order, t_hi);
        pde::Simulator sim(params, g);
        ImpactTrajectory traj = sim.run_metaorder(order, 1.2 * t_hi);
        for (int i = 0; i < points; ++i) {
            double t = t_lo * std::pow(t_hi / t_lo,
                                       static_cast<double>(i) / (points - 1));
            double x = traj.at(t);
            lx.push_back(std::log(t));
            ly.push_back(std::log(std::abs(x)));
            pts.push_back({{"t", t}, {"impact", x}});
        }
    } else {
        throw config_error("sweep.axis must be q or decay_time");
    }

    fit::LineFit f = fit::line(lx, ly);
    double ci = 1.96 * f.slope_stderr;
    bool pass = std::abs(f.slope - target) <= tol;
    json rep;
    rep["axis"] = axis;
    rep["points"] = pts;
    rep["slope"] = f.slope;
    rep["slope_ci95"] = ci;
    rep["target"] = target;
    rep["tolerance"] = tol;
    rep["pass"] = pass;
    rep["config"] = cfg.echo();
    io::write_json(rep, (out / "sweep.json").string());
    std::printf("%s sweep: slope %.4f +- %.4f (target %.2f +- %.2f) -> %s\n",
                axis.c_str(), f.slope, ci, target, tol, pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

int cmd_multiplier(const CommonArgs& args, const std::string& universe_file,
                   long long synthetic_n, std::uint64_t seed, double delta,
                   double tm) {
    analytics::Universe u;
    if (!universe_file.empty()) {
        u = analytics::ingest_csv(universe_file);
        for (const auto& e : u.row_errors)
            std::fprintf(stderr, "warning: %s\n", e.c_str());
    } else if (synthetic_n > 0) {
        u = analytics::synthetic_universe(static_cast<std::size_t>(synthetic_n),
                                          seed);
    } else {
        throw config_error("multiplier: give a universe file or --synthetic N");
    }
    analytics::MultiplierMode mode;
    if (delta > 0.0) mode.delta = delta;
    if (tm > 0.0) mode.tm = tm;
    mode.validate();
    auto rows = analytics::multipliers(u, mode);
    fs::path out = prep_out_dir(args.out_dir);

    {
        std::ofstream f(out / "multipliers.csv");
        require(static_cast<bool>(f), "cannot write multipliers.csv");
        f << "ticker,m\n";
        f.precision(17);
        for (const auto& r : rows) f << r.ticker << ',' << r.m << '\n';
    }
    {
        // x-y points file: log10 mcap vs M, plottable directly
        std::ofstream f(out / "multiplier_points.dat");
        require(static_cast<bool>(f), "cannot write multiplier_points.dat");
        f.precision(12);
        for (const auto& r : rows) f << r.log10_mcap << ' ' << r.m << '\n';
    }
    json rep;
    rep["provenance"] = u.provenance;
    rep["n"] = rows.size();
    rep["mode"] = mode.delta ? json{{"delta", *mode.delta}} : json{{"tm", *mode.tm}};
    if (rows.size() >= 8) {
        analytics::FitResult fr = analytics::summarize_and_fit(rows);
        rep["cubic_coeffs"] = fr.cubic_coeffs;
        rep["residual_std"] = fr.residual_std;
        rep["mean_m"] = fr.mean_m;
        rep["std_m"] = fr.std_m;
        rep["non_monotonic"] = fr.non_monotonic;
        std::printf("mean M %.4f, std M %.4f over %zu stocks%s\n", fr.mean_m,
                    fr.std_m, rows.size(),
                    fr.non_monotonic ? " (fitted cubic is non-monotonic)" : "");
    } else {
        double mean = 0.0;
        for (const auto& r : rows) mean += r.m;
        mean /= rows.empty() ? 1.0 : static_cast<double>(rows.size());
        rep["mean_m"] = mean;
        std::printf("mean M %.4f over %zu stocks (too few for a cubic fit)\n",
                    mean, rows.size());
    }
    io::write_json(rep, (out / "multiplier_fit.json").string());
    return 0;
}

int cmd_mrr(const CommonArgs& args) {
    io::Config cfg = load_config(args, /*required=*/false);
    mrr::MrrConfig mc;
    mc.s = cfg.get_num("mrr.s", 0.01);
    mc.c1 = cfg.get_num("mrr.c1", 0.0);
    mc.v0 = cfg.get_num("mrr.v0", 0.0);
    mc.n_trades = cfg.get_int("mrr.n_trades", 1000000);
    mc.seed = static_cast<std::uint64_t>(cfg.get_int("mrr.seed", 1));
    mrr::MrrResult res = mrr::simulate(mc);
    double z = res.upsilon_stderr > 0.0
                   ? (res.measured_upsilon - res.analytic_upsilon) / res.upsilon_stderr
                   : 0.0;
    bool pass = std::abs(z) <= 3.0;
    json rep;
    rep["inputs"] = {{"s", mc.s},
                     {"c1", mc.c1},
                     {"v0", mc.v0},
                     {"n_trades", mc.n_trades},
                     {"seed", mc.seed}};
    rep["measured_upsilon"] = res.measured_upsilon;
    rep["upsilon_stderr"] = res.upsilon_stderr;
    rep["analytic_upsilon"] = res.analytic_upsilon;
    rep["measured_c1"] = res.measured_c1;
    rep["return_autocorr1"] = res.return_autocorr1;
    rep["z"] = z;
    rep["pass"] = pass;
    fs::path out = prep_out_dir(args.out_dir);
    io::write_json(rep, (out / "mrr.json").string());
    std::printf("upsilon measured %.6g vs analytic %.6g (z = %+.2f) -> %s\n",
                res.measured_upsilon, res.analytic_upsilon, z,
                pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
}

int cmd_verify(const CommonArgs& args, const std::string& filter,
               double grid_scale) {
    verify::Options opts;
    opts.filter = filter;
    opts.grid_scale = grid_scale;
    verify::Runner runner(opts);
    auto results = runner.run();
    if (results.empty()) throw config_error("verify: filter matched no criteria");
    verify::print_results(results);
    fs::path out = prep_out_dir(args.out_dir);
    io::write_json(verify::to_json(results), (out / "verify.json").string());
    return verify::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latent order book impact laboratory"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string engine = "pde";
    std::string filter;
    double grid_scale = 1.0;
    std::string universe_file;
    long long synthetic_n = 0;
    std::uint64_t seed = 1;
    double delta = 0.0, tm = 0.0;

    auto add_common = [&](CLI::App* sub, bool with_config = true) {
        if (with_config) {
            sub->add_option("--config", common.config_path, "run configuration file");
            sub->add_option("--set", common.overrides,
                            "override config values (section.key=value)");
        }
        sub->add_option("--out", common.out_dir, "output directory");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one metaorder simulation");
    add_common(sim);
    sim->add_option("--engine", engine, "pde | green")->capture_default_str();

    CLI::App* sweep = app.add_subcommand("sweep", "scaling sweep with a slope fit");
    add_common(sweep);

    CLI::App* mult =
        app.add_subcommand("multiplier", "per-stock multiplier table and fit");
    add_common(mult, /*with_config=*/false);
    mult->add_option("universe", universe_file, "universe CSV (ticker,sigma1,adv,mcap)");
    mult->add_option("--synthetic", synthetic_n, "generate a synthetic universe");
    mult->add_option("--seed", seed, "synthetic universe seed");
    mult->add_option("--delta", delta, "belief threshold Delta (fraction)");
    mult->add_option("--tm", tm, "memory time Tm (days)");

    CLI::App* mrr_cmd = app.add_subcommand("mrr", "spread/volatility Monte Carlo");
    add_common(mrr_cmd);

    CLI::App* ver = app.add_subcommand("verify", "run the acceptance criteria");
    add_common(ver, /*with_config=*/false);
    ver->add_option("--filter", filter, "criterion id or name substring");
    ver->add_option("--grid-scale", grid_scale,
                    "scale hygiene reference grids (diagnostics)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(common, engine);
        if (sweep->parsed()) return cmd_sweep(common);
        if (mult->parsed())
            return cmd_multiplier(common, universe_file, synthetic_n, seed, delta, tm);
        if (mrr_cmd->parsed()) return cmd_mrr(common);
        if (ver->parsed()) return cmd_verify(common, filter, grid_scale);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        // diagnostics file with whatever context we have
        try {
            fs::path out = prep_out_dir(common.out_dir);
            json diag;
            diag["error"] = e.what();
            io::write_json(diag, (out / "diagnostics.json").string());
        } catch (...) {
        }
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
