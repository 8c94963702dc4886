#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "llob/memory_dist.hpp"
#include "llob/model.hpp"
#include "llob/rng.hpp"

using namespace llob;

TEST_CASE("derived quantities at unit parameters") {
    auto p = ModelParams::finite_memory(1.0, 1.0, 1.0);
    auto d = derive(p);
    CHECK(d.liquidity == Catch::Approx(1.0));
    CHECK(d.daily_volume == Catch::Approx(1.0));
    CHECK(d.memory_time == Catch::Approx(1.0));
    CHECK(d.p == Catch::Approx(1.0));
}

TEST_CASE("memory time from the cancellation rate") {
    auto p = ModelParams::finite_memory(1.0, 0.0625, 0.3);
    CHECK(p.memory_time() == Catch::Approx(16.0));
}

TEST_CASE("liquidity and volume are linear in the deposition rate") {
    auto a = ModelParams::finite_memory(0.02, 0.1, 0.4);
    auto b = ModelParams::finite_memory(0.02, 0.1, 0.8);
    CHECK(b.liquidity() == Catch::Approx(2.0 * a.liquidity()));
    CHECK(b.daily_volume() == Catch::Approx(2.0 * a.daily_volume()));
}

TEST_CASE("nu = 0 flags infinite memory and requires explicit liquidity") {
    auto p = ModelParams::infinite_memory(1.0, 2.5);
    CHECK(p.infinite());
    CHECK(std::isinf(p.memory_time()));
    CHECK(p.p() == 0.0);
    CHECK(p.liquidity() == 2.5);
    CHECK_THROWS_AS(ModelParams::finite_memory(1.0, 0.0, 1.0), config_error);
}

TEST_CASE("negative or zero inputs are rejected") {
    CHECK_THROWS_AS(ModelParams::finite_memory(-1.0, 1.0, 1.0), config_error);
    CHECK_THROWS_AS(ModelParams::finite_memory(1.0, -0.5, 1.0), config_error);
    CHECK_THROWS_AS(ModelParams::finite_memory(1.0, 1.0, -1.0), config_error);
    CHECK_THROWS_AS(params_from_market(1.0, 1.0, 0.0), config_error);
}

TEST_CASE("params_from_market identity at unit inputs") {
    auto p = params_from_market(1.0, 1.0, 1.0);
    CHECK(p.sigma1() == Catch::Approx(1.0));
    CHECK(p.nu() == Catch::Approx(1.0));
    CHECK(p.lam() == Catch::Approx(1.0));
}

TEST_CASE("params_from_market round-trips through derive") {
    Rng rng(42);
    for (int k = 0; k < 200; ++k) {
        double sigma1 = 0.001 + 0.2 * rng.uniform();
        double v1 = std::exp(8.0 * (rng.uniform() - 0.5));
        double tm = 0.5 + 40.0 * rng.uniform();
        auto p = params_from_market(sigma1, v1, tm);
        auto d = derive(p);
        CHECK(d.daily_volume == Catch::Approx(v1).epsilon(1e-12));
        CHECK(d.memory_time == Catch::Approx(tm).epsilon(1e-12));
        CHECK(p.sigma1() == Catch::Approx(sigma1).epsilon(1e-12));
        CHECK(d.daily_volume ==
              Catch::Approx(sigma1 * sigma1 * d.liquidity).epsilon(1e-12));
    }
}

TEST_CASE("market inversion rejects an infinite memory time") {
    CHECK_THROWS_AS(
        params_from_market(0.025, 1.0, std::numeric_limits<double>::infinity()),
        config_error);
}

TEST_CASE("price-unit rescaling acts as expected on derived quantities") {
    // x -> c x: sigma1 -> c sigma1, lam -> lam/c; V1 invariant, L -> L/c^2,
    // p -> p/c.
    Rng rng(7);
    for (int k = 0; k < 100; ++k) {
        double sigma1 = 0.01 + rng.uniform();
        double nu = 0.05 + rng.uniform();
        double lam = 0.1 + rng.uniform();
        double c = 0.1 + 5.0 * rng.uniform();
        auto base = derive(ModelParams::finite_memory(sigma1, nu, lam));
        auto scaled = derive(ModelParams::finite_memory(c * sigma1, nu, lam / c));
        CHECK(scaled.daily_volume == Catch::Approx(base.daily_volume).epsilon(1e-12));
        CHECK(scaled.liquidity == Catch::Approx(base.liquidity / (c * c)).epsilon(1e-12));
        CHECK(scaled.p == Catch::Approx(base.p / c).epsilon(1e-12));
        CHECK(scaled.memory_time == Catch::Approx(base.memory_time).epsilon(1e-12));
    }
}

TEST_CASE("metaorder spec validation") {
    CHECK(MetaorderSpec(6.0, 2.0).rate() == Catch::Approx(3.0));
    CHECK(MetaorderSpec(-6.0, 2.0).rate() == Catch::Approx(-3.0));
    CHECK_THROWS_AS(MetaorderSpec(1.0, 0.0), config_error);
    CHECK_THROWS_AS(MetaorderSpec(1.0, -1.0), config_error);
}

TEST_CASE("memory distribution: point mass moment") {
    auto d = MemoryDistribution::point_mass(16.0);
    CHECK(d.inv_sqrt_moment() == Catch::Approx(0.25));
    CHECK_THROWS_AS(MemoryDistribution::point_mass(0.0), config_error);
}

TEST_CASE("memory distribution: uniform density moment") {
    // int_1^4 (1/3) x^{-1/2} dx = 2/3
    auto d = MemoryDistribution::uniform(1.0, 4.0);
    CHECK(d.inv_sqrt_moment() == Catch::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("memory distribution: density must normalise") {
    CHECK_THROWS_AS(MemoryDistribution::tabulated({1.0, 3.0}, {1.0, 1.0}),
                    config_error);
}

TEST_CASE("memory distribution: support touching zero stays integrable") {
    // density 2x on [0, 1]: moment = int 2x/sqrt(x) = 4/3
    auto d = MemoryDistribution::tabulated({0.0, 1.0}, {0.0, 2.0});
    CHECK(d.inv_sqrt_moment() == Catch::Approx(4.0 / 3.0).epsilon(1e-6));
}
