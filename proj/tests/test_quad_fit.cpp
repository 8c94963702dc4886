#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "llob/fit.hpp"
#include "llob/quad.hpp"
#include "llob/rng.hpp"

using namespace llob;

TEST_CASE("gauss panels integrate smooth functions to machine precision") {
    auto f = [](double x) { return std::exp(-x * x); };
    double v = quad::gauss_panels(f, -6.0, 6.0, 24, quad::gl32());
    CHECK(v == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(quad::gauss([](double x) { return x * x * x + 2.0; }, -1.0, 3.0,
                      quad::gl8()) == Catch::Approx(28.0).epsilon(1e-14));
}

TEST_CASE("adaptive simpson hits the requested tolerance") {
    auto f = [](double x) { return std::sin(10.0 * x) / (1.0 + x); };
    double exact = quad::adaptive(f, 0.0, 3.0, 1e-12);
    double coarse = quad::adaptive(f, 0.0, 3.0, 1e-7);
    CHECK(std::abs(exact - coarse) < 1e-6);
}

TEST_CASE("line fit recovers a noiseless slope") {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
        x.push_back(0.3 * i);
        y.push_back(2.5 - 0.5 * x.back());
    }
    auto f = fit::line(x, y);
    CHECK(f.slope == Catch::Approx(-0.5).epsilon(1e-12));
    CHECK(f.intercept == Catch::Approx(2.5).epsilon(1e-12));
    CHECK(f.slope_stderr < 1e-10);
}

TEST_CASE("cubic fit reproduces exact cubics and is shift-equivariant") {
    Rng rng(5);
    std::vector<double> x, y;
    for (int i = 0; i < 40; ++i) {
        double xx = 9.0 + 3.0 * rng.uniform();
        x.push_back(xx);
        y.push_back(1.0 - 0.2 * xx + 0.03 * xx * xx - 0.001 * xx * xx * xx);
    }
    auto f = fit::polynomial(x, y, 3);
    for (int i = 0; i < 40; ++i) CHECK(f.eval(x[i]) == Catch::Approx(y[i]).margin(1e-9));
    CHECK(f.residual_std < 1e-9);

    // shifting the design by +1 leaves residuals unchanged
    std::vector<double> noisy(y), xs(x);
    for (auto& v : noisy) v += 0.05 * rng.normal();
    auto f1 = fit::polynomial(x, noisy, 3);
    for (auto& v : xs) v += 1.0;
    auto f2 = fit::polynomial(xs, noisy, 3);
    CHECK(f1.residual_std == Catch::Approx(f2.residual_std).epsilon(1e-9));
    for (int i = 0; i < 40; ++i)
        CHECK(f1.eval(x[i]) == Catch::Approx(f2.eval(xs[i])).margin(1e-8));
}

TEST_CASE("fit residuals are orthogonal to the design") {
    Rng rng(6);
    std::vector<double> x, y;
    for (int i = 0; i < 60; ++i) {
        x.push_back(8.0 + 4.0 * rng.uniform());
        y.push_back(0.5 + 0.1 * rng.normal() + 0.02 * x.back());
    }
    auto f = fit::polynomial(x, y, 3);
    CHECK(fit::residual_design_dot(x, y, f, 3) < 1e-8);
}

TEST_CASE("rank-deficient designs are rejected") {
    std::vector<double> x(10, 2.0), y(10, 1.0);
    CHECK_THROWS_AS(fit::polynomial(x, y, 3), numeric_error);
}
