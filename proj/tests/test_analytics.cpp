#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "llob/analytics.hpp"

using namespace llob;

namespace {
std::string data_path(const std::string& name) {
    return std::string(LLOB_TEST_DATA_DIR) + "/" + name;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << body;
}
}  // namespace

TEST_CASE("ingest accepts a clean file and reports row errors") {
    auto p = data_path("u1.csv");
    std::string body =
        "ticker,sigma1,adv,mcap\n"
        "AAA,0.025,1e7,2e9\n"
        "BBB,0.031,5e6,8e8\n"
        "BAD,-0.5,1e6,1e9\n";
    for (int i = 0; i < 9; ++i)
        body += "C" + std::to_string(i) + ",0.02,2e7,9e9\n";
    write_file(p, body);
    auto u = analytics::ingest_csv(p);
    CHECK(u.records.size() == 11);
    REQUIRE(u.row_errors.size() == 1);
    CHECK(u.row_errors[0].find("line 4") != std::string::npos);
}

TEST_CASE("ingest rejects duplicate tickers and short rows") {
    auto p = data_path("u2.csv");
    write_file(p,
               "ticker,sigma1,adv,mcap\n"
               "AAA,0.025,1e7,2e9\n"
               "AAA,0.026,1e7,2e9\n"
               "CUT,0.02\n"
               "DDD,0.02,1e7,3e9\n"
               "EEE,0.02,1e7,3e9\n"
               "FFF,0.02,1e7,3e9\n"
               "GGG,0.02,1e7,3e9\n"
               "HHH,0.02,1e7,3e9\n"
               "III,0.02,1e7,3e9\n"
               "JJJ,0.02,1e7,3e9\n"
               "KKK,0.02,1e7,3e9\n"
               "LLL,0.02,1e7,3e9\n"
               "MMM,0.02,1e7,3e9\n"
               "NNN,0.02,1e7,3e9\n"
               "OOO,0.02,1e7,3e9\n"
               "PPP,0.02,1e7,3e9\n"
               "QQQ,0.02,1e7,3e9\n"
               "RRR,0.02,1e7,3e9\n"
               "SSS,0.02,1e7,3e9\n"
               "TTT,0.02,1e7,3e9\n");
    auto u = analytics::ingest_csv(p);
    CHECK(u.records.size() == 18);
    CHECK(u.row_errors.size() == 2);
}

TEST_CASE("ingest fails fast on a bad header or too many bad rows") {
    auto p = data_path("u3.csv");
    write_file(p, "symbol,vol,adv,cap\nAAA,1,2,3\n");
    CHECK_THROWS_AS(analytics::ingest_csv(p), config_error);
    write_file(p,
               "ticker,sigma1,adv,mcap\n"
               "AAA,-1,1,1\nBBB,-1,1,1\nCCC,0.02,1e7,1e9\n");
    CHECK_THROWS_AS(analytics::ingest_csv(p), config_error);
    CHECK_THROWS_AS(analytics::ingest_csv(data_path("missing.csv")), config_error);
}

TEST_CASE("empty file yields an empty universe with a warning") {
    auto p = data_path("u4.csv");
    write_file(p, "");
    auto u = analytics::ingest_csv(p);
    CHECK(u.records.empty());
    CHECK(u.row_errors.size() == 1);
}

TEST_CASE("a synthetic universe round-trips through emit/ingest") {
    auto u = analytics::synthetic_universe(950, 1);
    auto p = data_path("u5.csv");
    analytics::emit_csv(u, p);
    auto back = analytics::ingest_csv(p);
    REQUIRE(back.records.size() == u.records.size());
    for (std::size_t i = 0; i < u.records.size(); ++i) {
        CHECK(back.records[i].ticker == u.records[i].ticker);
        CHECK(back.records[i].sigma1 == u.records[i].sigma1);
        CHECK(back.records[i].v1 == u.records[i].v1);
        CHECK(back.records[i].mcap == u.records[i].mcap);
    }
}

TEST_CASE("multiplier table worked number and scalings") {
    analytics::Universe u;
    u.records.push_back({"ONE", 0.025, 1e7, 200.0 * 1e7});
    analytics::MultiplierMode delta_mode;
    delta_mode.delta = 0.10;
    auto rows = analytics::multipliers(u, delta_mode);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].m == Catch::Approx(0.625).epsilon(1e-12));

    analytics::MultiplierMode tm_mode;
    tm_mode.tm = 16.0;  // = 0.1^2 / 0.025^2
    auto rows2 = analytics::multipliers(u, tm_mode);
    CHECK(rows2[0].m == Catch::Approx(rows[0].m).epsilon(1e-12));

    // doubling adv halves M
    u.records[0].v1 *= 2.0;
    auto rows3 = analytics::multipliers(u, delta_mode);
    CHECK(rows3[0].m == Catch::Approx(0.5 * rows[0].m).epsilon(1e-12));

    analytics::MultiplierMode bad;
    CHECK_THROWS_AS(analytics::multipliers(u, bad), config_error);
    bad.delta = 0.1;
    bad.tm = 16.0;
    CHECK_THROWS_AS(analytics::multipliers(u, bad), config_error);
}

TEST_CASE("multiplier tables are permutation-invariant") {
    auto u = analytics::synthetic_universe(64, 3);
    analytics::MultiplierMode mode;
    mode.delta = 0.10;
    auto rows = analytics::multipliers(u, mode);
    auto shuffled = u;
    std::mt19937 g(17);
    std::shuffle(shuffled.records.begin(), shuffled.records.end(), g);
    auto rows2 = analytics::multipliers(shuffled, mode);
    double sum1 = 0.0, sum2 = 0.0;
    for (const auto& r : rows) sum1 += r.m;
    for (const auto& r : rows2) sum2 += r.m;
    CHECK(sum1 == Catch::Approx(sum2).epsilon(1e-12));
}

TEST_CASE("equal multipliers fit to a constant cubic") {
    analytics::Universe u;
    for (int i = 0; i < 12; ++i) {
        // choose records with identical M = 0.5 but spread mcaps
        double mcap = 1e9 * std::pow(10.0, i / 4.0);
        double sigma1 = 0.025;
        double v1 = 0.5 * sigma1 * sigma1 / 0.10 * mcap / 0.5;
        u.records.push_back({"T" + std::to_string(i), sigma1, v1, mcap});
    }
    analytics::MultiplierMode mode;
    mode.delta = 0.10;
    auto rows = analytics::multipliers(u, mode);
    auto fr = analytics::summarize_and_fit(rows);
    CHECK(fr.mean_m == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(fr.std_m < 1e-12);
    CHECK(fr.residual_std < 1e-10);
    CHECK(std::abs(fr.cubic_coeffs[1]) < 1e-10);
    CHECK(std::abs(fr.cubic_coeffs[2]) < 1e-10);
    CHECK(std::abs(fr.cubic_coeffs[3]) < 1e-10);
}

TEST_CASE("synthetic universe statistics are order one") {
    auto u = analytics::synthetic_universe(950, 1);
    analytics::MultiplierMode mode;
    mode.delta = 0.10;
    auto rows = analytics::multipliers(u, mode);
    auto fr = analytics::summarize_and_fit(rows);
    CHECK(fr.mean_m > 0.05);
    CHECK(fr.mean_m < 20.0);
    CHECK(fr.std_m > 0.0);
}

TEST_CASE("fit requires enough records") {
    auto u = analytics::synthetic_universe(7, 1);
    analytics::MultiplierMode mode;
    mode.delta = 0.10;
    CHECK_THROWS_AS(analytics::summarize_and_fit(analytics::multipliers(u, mode)),
                    config_error);
}

TEST_CASE("cost estimate worked numbers") {
    StockRecord rec{"X", 0.025, 1e7, 2e9};
    // Q = 1% of T v1, T = 1 -> transient 0.00125 = 0.125%
    auto ce = analytics::cost_estimate(rec, 0.01 * 1e7, 1.0, 0.5);
    CHECK(ce.transient_pct == Catch::Approx(0.125).epsilon(1e-12));
    CHECK(ce.permanent_pct ==
          Catch::Approx(100.0 * permanent_impact(0.025, 1e7, 16.0, 1e5))
              .epsilon(1e-12));
    auto zero = analytics::cost_estimate(rec, 0.0, 1.0, 0.5);
    CHECK(zero.transient_pct == 0.0);
    CHECK(zero.permanent_pct == 0.0);
    // futures-style: one contract, adv in contracts/day
    StockRecord fut{"F", 0.012, 50000.0, 1.0};
    fut.mcap = 1.0;  // placeholder; not used by the permanent figure
    auto fc = analytics::cost_estimate(fut, 1.0, 1.0, 0.5, 9.0);
    CHECK(fc.permanent_pct ==
          Catch::Approx(100.0 * 0.5 * 0.012 * 1.0 / (50000.0 * 3.0)).epsilon(1e-12));
    // regime notes appear when pushed out of validity
    auto warned = analytics::cost_estimate(rec, 0.2 * 1e7, 1.0, 0.5);
    CHECK(!warned.notes.empty());
}
