#include <cmath>
#include <random>

#include <doctest.h>

#include "mpmv/market.hpp"
#include "test_support.hpp"

using namespace mpmv;
using testutil::ten_asset_market;

TEST_SUITE("market") {

TEST_CASE("validate flags a zero excess return in every period") {
    Vec b = Vec::Constant(1, 1.0);
    Mat sigma = Mat::Constant(1, 1, 0.2);
    const auto params = MarketParams::constant(4, 1.0, b, sigma);
    const auto report = validate(params);
    REQUIRE_FALSE(report.pass());
    CHECK(report.failures.size() == 4);
    for (const auto& f : report.failures) CHECK(f.assumption == Assumption::ExcessReturnNonzero);
    CHECK(report.failures[2].period == 2);
}

TEST_CASE("ten-asset diagonal market passes all checks") {
    CHECK(validate(ten_asset_market(90)).pass());
}

TEST_CASE("zero volatility fails positive definiteness") {
    Vec b = Vec::Constant(2, 1.01);
    Mat sigma = Mat::Zero(2, 2);
    const auto report = validate(MarketParams::constant(3, 1.0, b, sigma));
    REQUIRE_FALSE(report.pass());
    CHECK(report.failures.front().assumption == Assumption::VolatilityGramPD);
}

TEST_CASE("non-positive risk-free rate is reported") {
    Vec b = Vec::Constant(1, 0.05);
    Mat sigma = Mat::Constant(1, 1, 0.2);
    const auto report = validate(MarketParams::constant(2, 0.0, b, sigma));
    REQUIRE_FALSE(report.pass());
    CHECK(report.failures.front().assumption == Assumption::RiskFreePositive);
}

TEST_CASE("gross rates below one (negative rates) are valid as long as positive") {
    Vec b = Vec::Constant(1, 1.01);
    Mat sigma = Mat::Constant(1, 1, 0.2);
    const auto params = MarketParams::constant(4, 0.98, b, sigma);
    CHECK(validate(params).pass());
    CHECK(r_prod(params, 0, 3) == doctest::Approx(std::pow(0.98, 4)).epsilon(1e-14));
    CHECK_NOTHROW(beta_schedule(params));
}

TEST_CASE("beta of a scalar market is gamma^2 / sigma^2") {
    const auto params = testutil::scalar_market(3);
    const auto beta = beta_schedule(params);
    REQUIRE(beta.size() == 3);
    for (double v : beta) CHECK(v == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("beta of the ten-asset market matches the diagonal hand sum") {
    const auto params = ten_asset_market(5);
    double oracle = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const double s = 0.01 + 0.001 * i;
        oracle += 0.0048 * 0.0048 / (s * s);
    }
    const auto beta = beta_schedule(params);
    CHECK(beta.front() == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(std::abs(beta.front() - 1.0690) < 1e-4);
}

TEST_CASE("two-asset diagonal beta separates") {
    Vec b(2);
    b << 1.03, 0.98;
    Mat sigma = Mat::Zero(2, 2);
    sigma(0, 0) = 0.2;
    sigma(1, 1) = 0.3;
    const auto params = MarketParams::constant(2, 1.0, b, sigma);
    const double expect = 0.03 * 0.03 / 0.04 + 0.02 * 0.02 / 0.09;
    CHECK(beta_schedule(params).front() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("beta rejects a rank-deficient volatility loading") {
    Vec b = Vec::Constant(2, 1.02);
    Mat sigma(2, 1);
    sigma << 0.2, 0.2;  // sigma sigma^T has rank 1
    CHECK_THROWS_AS(beta_schedule(MarketParams::constant(2, 1.0, b, sigma)),
                    AssumptionError);
}

TEST_CASE("r_prod matches direct exponentiation and honors conventions") {
    const auto params = ten_asset_market(40);
    CHECK(r_prod(params, 0, 29) == doctest::Approx(std::pow(1.0002, 30)).epsilon(1e-13));
    CHECK(r_prod(params, 7, 3) == 1.0);
    CHECK(r_prod(params, 40, 39) == 1.0);  // empty tail product at s = T

    const auto flat = testutil::unit_beta_market(10);
    CHECK(r_prod(flat, 0, 9) == 1.0);
}

TEST_CASE("r_prod splits multiplicatively") {
    std::mt19937_64 gen(411);
    for (int rep = 0; rep < 50; ++rep) {
        const auto params = testutil::random_market(gen, 5, 40);
        std::uniform_int_distribution<int> pick(0, params.horizon_T - 1);
        int a = pick(gen), c = pick(gen);
        if (a > c) std::swap(a, c);
        if (a == c) continue;
        std::uniform_int_distribution<int> mid(a, c - 1);
        const int m = mid(gen);
        const double whole = r_prod(params, a, c);
        const double split = r_prod(params, a, m) * r_prod(params, m + 1, c);
        CHECK(whole == doctest::Approx(split).epsilon(1e-12));
    }
}

TEST_CASE("beta is invariant under orthogonal right-rotations of sigma") {
    std::mt19937_64 gen(412);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int rep = 0; rep < 25; ++rep) {
        const auto params = testutil::random_market(gen, 3, 12);
        const int d = params.d_noise;
        Mat raw(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) raw(i, j) = normal(gen);
        const Mat q = Eigen::HouseholderQR<Mat>(raw).householderQ();

        MarketParams rotated = params;
        for (auto& s : rotated.sigma) s = s * q;
        const auto beta = beta_schedule(params);
        const auto beta_rot = beta_schedule(rotated);
        for (size_t s = 0; s < beta.size(); ++s)
            CHECK(std::abs(beta[s] - beta_rot[s]) < 1e-10 * std::max(1.0, beta[s]));
    }
}

TEST_CASE("diagonal beta matches the explicit sum on random diagonal markets") {
    std::mt19937_64 gen(413);
    std::uniform_real_distribution<double> g_dist(0.01, 0.1);
    std::uniform_real_distribution<double> s_dist(0.1, 0.4);
    for (int rep = 0; rep < 25; ++rep) {
        const int n = 1 + static_cast<int>(gen() % 5);
        Vec gamma(n);
        Mat sigma = Mat::Zero(n, n);
        double expect = 0.0;
        for (int i = 0; i < n; ++i) {
            gamma[i] = g_dist(gen);
            sigma(i, i) = s_dist(gen);
            expect += gamma[i] * gamma[i] / (sigma(i, i) * sigma(i, i));
        }
        Vec b = gamma.array() + 1.0;
        const auto params = MarketParams::constant(2, 1.0, b, sigma);
        CHECK(beta_schedule(params).front() == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("factories reject malformed shapes") {
    Vec b = Vec::Constant(2, 1.01);
    Mat sigma = Mat::Identity(2, 2) * 0.2;
    CHECK_THROWS_AS(MarketParams::constant(0, 1.0, b, sigma), std::invalid_argument);
    CHECK_THROWS_AS(MarketParams::constant(2, 1.0, b, Mat::Identity(3, 3)), std::invalid_argument);
    CHECK_THROWS_AS(MarketParams::constant(2, 1.0, b, sigma, 0.0), std::invalid_argument);
}

TEST_CASE("truncated keeps a prefix of the schedules") {
    const auto params = ten_asset_market(30);
    const auto sub = params.truncated(7);
    CHECK(sub.horizon_T == 7);
    CHECK(sub.r.size() == 7);
    CHECK(r_prod(sub, 0, 6) == doctest::Approx(r_prod(params, 0, 6)).epsilon(1e-15));
    CHECK_THROWS_AS(params.truncated(31), std::invalid_argument);
}

}  // TEST_SUITE
