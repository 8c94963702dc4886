#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "llob/perturbation.hpp"

using namespace llob;
namespace pert = llob::perturbation;

TEST_CASE("the solve is exactly linear in beta") {
    pert::ScaledTrajectory a = pert::solve_F({0.5, 20.0, 512});
    pert::ScaledTrajectory b = pert::solve_F({2.0, 20.0, 512});
    for (std::size_t i = 0; i < a.f.size(); ++i)
        CHECK(b.f[i] == Catch::Approx(4.0 * a.f[i]).margin(1e-13));
}

TEST_CASE("beta = 0 gives the all-zero solution (F == F_inf == 0)") {
    pert::ScaledTrajectory z = pert::solve_F({0.0, 20.0, 512});
    for (double v : z.f) CHECK(std::abs(v) < 1e-14);
    CHECK(z.plateau() == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("startup value matches the analytic u -> 0 limit") {
    // F(0) = beta (pi - 2)/sqrt(pi), bounded as the closed form implies
    pert::ScaledTrajectory s = pert::solve_F({1.0, 20.0, 1024});
    CHECK(s.f[0] == Catch::Approx((M_PI - 2.0) / std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(std::abs(s.f[1]) < 2.0);
}

TEST_CASE("closed-form shape holds for u >= 3 within 2% of the plateau") {
    pert::ScaledTrajectory s = pert::solve_F({1.0, 20.0, 2048});
    double p_inf = s.plateau();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        if (s.u[i] < 3.0) continue;
        worst = std::max(worst, std::abs(s.f[i] - pert::closed_form_f(
                                                      p_inf, 1.0, s.u[i])) /
                                    p_inf);
    }
    CHECK(worst < 0.02);
}

TEST_CASE("plateau-to-beta ratio reproduces the documented constant") {
    pert::ScaledTrajectory s = pert::solve_F({1.0, 40.0, 4096});
    CHECK(s.plateau() == Catch::Approx(pert::plateau_per_beta).epsilon(2e-4));
}

TEST_CASE("paper-normalised beta lands the plateau on (1/2) sigma1 Q/V1") {
    auto p = params_from_market(0.025, 1.0, 16.0);
    double q = 3.0;
    pert::ScaledTrajectory s = pert::solve_F({pert::paper_beta, 20.0, 2048});
    double plateau_phys = s.plateau() * p.sigma1() * q / p.daily_volume();
    CHECK(plateau_phys ==
          Catch::Approx(pert::f_infinity(p, q)).epsilon(0.005));
}

TEST_CASE("f_infinity and its algebraic identities") {
    auto p = params_from_market(0.025, 1.0, 16.0);
    CHECK(pert::f_infinity(p, 1.0) == Catch::Approx(0.0125));
    CHECK(pert::f_infinity(p, 0.0) == 0.0);
    CHECK(std::sqrt(p.nu()) * pert::f_infinity(p, 1.0) ==
          Catch::Approx(0.003125).epsilon(1e-15));
    auto p2 = ModelParams::finite_memory(0.025, 1.0 / 16.0, 7.0);
    // sigma1 Q / V1 with Q = V1 gives sigma1/2
    CHECK(pert::f_infinity(p2, p2.daily_volume()) == Catch::Approx(0.0125));
}

TEST_CASE("residual of the solved equation stays below 1e-3 of the plateau") {
    pert::ScaledTrajectory s = pert::solve_F({1.0, 20.0, 2048});
    CHECK(pert::residual_sup(s) < 1e-3 * s.plateau());
}

TEST_CASE("grid refinement stability at the horizon") {
    pert::ScaledTrajectory a = pert::solve_F({1.0, 20.0, 1024});
    pert::ScaledTrajectory b = pert::solve_F({1.0, 20.0, 4096});
    CHECK(a.back() == Catch::Approx(b.back()).epsilon(2e-4));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(pert::solve_F({1.0, 2.0, 1024}), config_error);
    CHECK_THROWS_AS(pert::solve_F({1.0, 20.0, 64}), config_error);
}

TEST_CASE("exact-kernel correction: endpoints and plateau") {
    pert::ScaledTrajectory z = pert::solve_exact_kernel_correction(40.0, 2048);
    CHECK(z.f[0] == Catch::Approx(0.5).epsilon(1e-10));
    // plateau 1.0 in sigma1 Q/V1 units: twice the closed-form constant; the
    // simulation engines measure the same level (see acceptance criterion 7)
    CHECK(z.plateau() == Catch::Approx(1.0).epsilon(2e-3));
}
