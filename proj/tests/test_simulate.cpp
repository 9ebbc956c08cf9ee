#include <cmath>
#include <random>

#include <doctest.h>

#include "mpmv/frontier.hpp"
#include "mpmv/horizon.hpp"
#include "mpmv/rng.hpp"
#include "mpmv/simulate.hpp"
#include "test_support.hpp"

using namespace mpmv;

namespace {

SimConfig table_run(int tau, StrategyKind kind, uint64_t seed, int M = 5000) {
    const auto params = testutil::ten_asset_market(tau);
    SimConfig config;
    config.params = params;
    config.x = 1.0;
    config.horizon = tau;
    config.n_paths = M;
    config.seed = seed;
    if (kind == StrategyKind::EqualWeight) {
        config.strategy = equal_weight_rule(params.n_assets);
    } else {
        const double g = std::pow(1.0002, tau) + 0.5 * std::pow(1.008, tau);
        config.strategy = bellman_strategy(params, mu_from_target(params, 0, 1.0, g), 0);
    }
    return config;
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("zero allocation earns exactly the risk-free product on every path") {
    Vec b = Vec::Constant(1, 1.05);
    Mat sigma = Mat::Constant(1, 1, 1e-6);
    auto params = MarketParams::constant(4, 1.01, b, sigma, 1e-14);
    SimConfig config;
    config.params = params;
    config.strategy = bellman_strategy(params, 1.0, 0);
    for (auto& pi : config.strategy.capitals) pi.setZero();
    config.x = 2.0;
    config.horizon = 4;
    config.n_paths = 50;
    config.seed = 7;
    const auto terminal = simulate_terminal_wealth(config);
    double compounded = 2.0;
    for (int s = 0; s < 4; ++s) compounded *= 1.01;
    for (double v : terminal) CHECK(v == compounded);  // bit-identical paths
    const auto res = simulate_wealth(config);
    CHECK(res.sample_mean == doctest::Approx(compounded).epsilon(1e-15));
    CHECK(res.sample_variance <= 1e-28);  // zero up to summation round-off
}

TEST_CASE("ten-asset market, target-calibrated run over 30 periods") {
    const auto res = simulate_wealth(table_run(30, StrategyKind::Bellman, 20090803));
    CHECK(std::abs(res.sample_mean - 1.6410) < 0.01);
    CHECK(std::abs(res.sample_variance - 0.0126) < 1e-3);
}

TEST_CASE("optimal-horizon run over 63 periods") {
    const auto res = simulate_wealth(table_run(63, StrategyKind::Bellman, 20090804));
    CHECK(std::abs(res.sample_mean - 1.8387) < 0.01);
    CHECK(std::abs(res.sample_variance - 0.0101) < 1e-3);
}

TEST_CASE("equal-weight growth tracks the mean gross return") {
    const auto res = simulate_wealth(table_run(30, StrategyKind::EqualWeight, 20090805));
    // E[X(tau)] compounds at mean(b) = 1.005 per period.
    const double expect = std::pow(1.005, 30);
    CHECK(std::abs(res.sample_mean - expect) < 4.0 * res.std_error);
}

TEST_CASE("identical configs give bit-identical results") {
    const auto a = simulate_wealth(table_run(10, StrategyKind::Bellman, 99));
    const auto b = simulate_wealth(table_run(10, StrategyKind::Bellman, 99));
    CHECK(a.sample_mean == b.sample_mean);
    CHECK(a.sample_variance == b.sample_variance);
    const auto pa = simulate_terminal_wealth(table_run(10, StrategyKind::Bellman, 99));
    const auto pb = simulate_terminal_wealth(table_run(10, StrategyKind::Bellman, 99));
    CHECK(pa == pb);
}

TEST_CASE("sample moments agree with the frontier recursions within four standard errors") {
    std::mt19937_64 gen(451);
    std::uniform_real_distribution<double> mu_dist(0.5, 4.0);
    for (int rep = 0; rep < 20; ++rep) {
        const auto params = testutil::random_market(gen, 3, 20);
        const double mu = mu_dist(gen);
        SimConfig config;
        config.params = params;
        config.strategy = bellman_strategy(params, mu, 0);
        config.x = 1.0;
        config.horizon = params.horizon_T;
        config.n_paths = 2000;
        config.seed = 5000 + rep;
        const auto res = simulate_wealth(config);
        const auto curve = frontier_recursion(params, mu, 0, 1.0);
        CHECK(std::abs(res.sample_mean - curve.mean.back()) < 4.0 * res.std_error);
        // Var(sample variance) ~ 2 sigma^4 / M for Gaussian terminal wealth.
        const double var_se = curve.variance.back() * std::sqrt(2.0 / config.n_paths);
        CHECK(std::abs(res.sample_variance - curve.variance.back()) < 4.0 * var_se);
    }
}

TEST_CASE("pre-committed rule simulates to the same terminal mean as its frontier") {
    const auto params = testutil::unit_beta_market(4);
    const double mu = 1.0;
    SimConfig config;
    config.params = params;
    config.strategy = precommitted_strategy(params, mu, 0, 1.0);
    config.x = 1.0;
    config.horizon = 4;
    config.n_paths = 4000;
    config.seed = 31;
    const auto res = simulate_wealth(config);
    // E[X(T)] = x prod r + (prod(beta+1) - 1) / (2 mu) = 1 + 15/2.
    CHECK(std::abs(res.sample_mean - 8.5) < 4.0 * res.std_error);
}

TEST_CASE("averaging a run with its negated twin collapses the error of linear functionals") {
    auto config = table_run(20, StrategyKind::Bellman, 4242, 2000);
    const auto plain = simulate_terminal_wealth(config);
    config.negate_noise = true;
    const auto mirrored = simulate_terminal_wealth(config);

    const int M = static_cast<int>(plain.size());
    auto stderr_of = [M](const std::vector<double>& v) {
        double mean = 0.0;
        for (double t : v) mean += t;
        mean /= M;
        double ss = 0.0;
        for (double t : v) ss += (t - mean) * (t - mean);
        return std::sqrt(ss / (M - 1) / M);
    };
    std::vector<double> averaged(M);
    for (int m = 0; m < M; ++m) averaged[m] = 0.5 * (plain[m] + mirrored[m]);
    CHECK(stderr_of(averaged) <= 0.5 * stderr_of(plain));
}

TEST_CASE("batch runner preserves order, seeds and per-row failures") {
    SUBCASE("empty in, empty out") { CHECK(simulate_table({}).empty()); }

    SUBCASE("table of six runs") {
        std::vector<SimConfig> configs;
        for (int tau : {30, 90}) configs.push_back(table_run(tau, StrategyKind::Bellman, 1000 + tau, 500));
        configs.push_back(table_run(63, StrategyKind::Bellman, 1063, 500));
        for (int tau : {30, 63, 90})
            configs.push_back(table_run(tau, StrategyKind::EqualWeight, 2000 + tau, 500));
        const auto rows = simulate_table(configs);
        REQUIRE(rows.size() == 6);
        for (const auto& row : rows) {
            REQUIRE(row.error.empty());
            CHECK(row.result->n_paths == 500);
        }
        CHECK(rows[0].result->seed == 1030);
        CHECK(rows[5].result->seed == 2090);
    }

    SUBCASE("identical rows are bit identical") {
        const auto cfg = table_run(15, StrategyKind::Bellman, 77, 200);
        const auto rows = simulate_table({cfg, cfg});
        CHECK(rows[0].result->sample_mean == rows[1].result->sample_mean);
        CHECK(rows[0].result->sample_variance == rows[1].result->sample_variance);
    }

    SUBCASE("a broken row does not abort the table") {
        auto good = table_run(5, StrategyKind::Bellman, 1, 50);
        auto bad = good;
        bad.horizon = 99;  // exceeds the schedule
        const auto rows = simulate_table({bad, good});
        CHECK_FALSE(rows[0].result.has_value());
        CHECK_FALSE(rows[0].error.empty());
        CHECK(rows[1].result.has_value());
    }
}

TEST_CASE("config validation") {
    auto config = table_run(5, StrategyKind::Bellman, 1, 10);
    SUBCASE("zero paths") {
        config.n_paths = 0;
        CHECK_THROWS_AS(simulate_wealth(config), std::domain_error);
    }
    SUBCASE("horizon beyond the deterministic schedule") {
        config.horizon = 6;
        CHECK_THROWS_AS(simulate_wealth(config), std::domain_error);
    }
    SUBCASE("horizon beyond the pre-committed schedule") {
        const auto pre3 = precommitted_strategy(config.params.truncated(3), 1.0, 0, 1.0);
        config.strategy = pre3;
        config.horizon = 5;
        CHECK_THROWS_AS(simulate_wealth(config), std::domain_error);
    }
    SUBCASE("asset count mismatch") {
        config.strategy = equal_weight_rule(3);
        CHECK_THROWS_AS(simulate_wealth(config), std::domain_error);
    }
}

TEST_CASE("normal inverse CDF round-trips the CDF to high accuracy") {
    for (double u : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.99, 1 - 1e-10}) {
        const double z = rng::inverse_normal_cdf(u);
        const double back = 0.5 * std::erfc(-z * 0.7071067811865475244);
        CHECK(std::abs(back - u) <= 1e-14 * std::max(u, 1e-300) + 1e-17);
    }
    CHECK(rng::inverse_normal_cdf(0.5) == 0.0);
    CHECK(rng::inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

}  // TEST_SUITE
