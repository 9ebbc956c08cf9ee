#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpmv/errors.hpp"

namespace mpmv {

struct PricePoint {
    std::string date;  // ISO-8601 YYYY-MM-DD
    double close = 0.0;
};

/// Daily close series; dates strictly increasing, prices strictly
/// positive. Row position is the day index used everywhere below.
struct PriceSeries {
    std::string label;
    std::vector<PricePoint> points;

    int size() const { return static_cast<int>(points.size()); }
    double close(int i) const { return points.at(i).close; }
};

/// Validates dates/prices and returns the series; DataError on violation.
PriceSeries make_series(std::string label, std::vector<PricePoint> points);

/// Reads a "date,close" CSV (header required, rows ascending by date).
/// Parse failures carry the 1-based line number.
PriceSeries load_prices(const std::string& path);

void write_prices(const PriceSeries& series, const std::string& path);

/// Daily prices generated from the discrete dynamics
///   P(s) = P(s-1) (b + sigma dW(s)),  dW i.i.d. standard normal,
/// with weekday-agnostic consecutive dates. asset_tag separates the noise
/// streams of different assets under one seed.
PriceSeries synthetic_prices(std::string label, double b, double sigma, int days, double p0,
                             uint64_t seed, uint64_t asset_tag = 0);

enum class BacktestStrategy { I, II, III, I_costs };

std::string to_string(BacktestStrategy s);

/// Rolling-window pipeline parameters. Day-level rates are rescaled to an
/// L-day period as 1 + (rate - 1) L.
struct BacktestConfig {
    int L = 1;        // single-period length in days
    int m0 = 20;      // window multiplier; window w = m0 L + 1 days
    int tau = 0;      // investment period; 0 means ceil(250 / L)
    int K = 1000;     // repetition count
    double r = 1.0002;      // daily risk-free gross return
    double theta = 1.008;   // daily excess factor
    double alpha = 0.5;     // excess-return scale
    double x = 1.0;         // initial wealth per repetition
    BacktestStrategy strategy = BacktestStrategy::I;
    double fee = 0.0;       // transaction fee rate r0 on gross risky notional
    double loan = 1.0003;   // daily loan gross rate, >= r
    double rf_daily = 0.0002;          // daily excess rate in the Sharpe metric
    double degenerate_beta = 1e-12;    // below this, fall back to risk-free

    int window() const { return m0 * L + 1; }
    double r_L() const { return 1.0 + (r - 1.0) * L; }
    double loan_L() const { return 1.0 + (loan - 1.0) * L; }
    double theta_L() const { return 1.0 + (theta - 1.0) * L; }
    int tau_default() const;   // ceil(250 / L)
    int tau_star() const;      // ceil(1 / (theta_L^2 - 1))
    int tau_effective() const; // per strategy: tau (I, III, I_costs) or tau* (II)
    /// g_L(tau) = x r_L^tau + alpha x theta_L^tau.
    double target(int tau_periods) const;
    void check() const;
};

/// L-day gross return means and variances estimated from the trailing
/// window at day t, plus the squared market price of risk they imply.
struct EstimatedParams {
    double b_hat[2] = {0.0, 0.0};
    double sigma2_hat[2] = {0.0, 0.0};
    double beta_hat = 0.0;
    bool degenerate = false;  // some sigma2 is zero or beta below threshold
};

/// Steps 1-2: daily simple returns over the w = m0 L + 1 trailing prices,
/// aggregated into m0 non-overlapping L-day sums I(t, s); b_hat = 1 +
/// mean(I) and sigma2_hat = sum (I - mean)^2 / (m0 - 1). No price after
/// day t is read.
EstimatedParams estimate_params(const PriceSeries& a, const PriceSeries& b, int t, int L, int m0,
                                double r_daily);

struct WealthPath {
    std::vector<double> values;  // X(0..tau); values[0] = x
    bool degenerate_fallback = false;
    double beta_hat = 0.0;
};

/// One fee/loan-adjusted wealth step: risky legs omega1/omega2 earn the
/// realized gross returns, a positive residual earns r_L, a negative one
/// pays loan_L, and the fee rate applies to the gross risky notional.
double fee_loan_step(double omega1, double omega2, double residual, double gross_a, double gross_b,
                     double r_L, double loan_L, double fee);

/// Step 3 execution with parameters frozen at day t. Capital amounts are
/// omega_k(s) = r_L^{s-tau} (b_hat_k - r_L) / (2 mu_hat sigma2_hat_k).
WealthPath run_strategy_I(const PriceSeries& a, const PriceSeries& b, const BacktestConfig& config,
                          int t);
/// Strategy I with tau replaced by tau*(theta, L); identical code path.
WealthPath run_strategy_II(const PriceSeries& a, const PriceSeries& b,
                           const BacktestConfig& config, int t);
/// Equal-split rebalanced wealth; no estimation involved.
WealthPath run_strategy_III(const PriceSeries& a, const PriceSeries& b,
                            const BacktestConfig& config, int t);
/// Strategy I under the fee/loan execution model.
WealthPath run_strategy_I_with_costs(const PriceSeries& a, const PriceSeries& b,
                                     const BacktestConfig& config, int t);

/// Yearly return and Sharpe over K repetitions:
///   Return = 250 / (tau L K) * sum (X_i - 1)
///   Sharpe = sqrt(250 / (tau L K)) (sum X_i - K - rf tau L K)
///            / sqrt(sum (X_i - mean)^2)
/// Sharpe is absent when the dispersion is zero.
struct AggregateMetrics {
    double yearly_return = 0.0;
    std::optional<double> sharpe;
};

AggregateMetrics aggregate_metrics(const std::vector<double>& terminal_wealths, int tau, int L,
                                   double rf_daily = 0.0002);

/// Formula-level counterparts fed by the estimated beta path:
///   Return = 250 / (L tau) (g - x)
///   Sharpe = sqrt(250 / (L tau)) K (g - x - rf tau L)
///            / sum_t [ alpha x theta_L^tau / sqrt(tau beta_hat(t)) ].
struct TheoryMetrics {
    double expected_yearly_return = 0.0;
    double expected_sharpe = 0.0;
};

TheoryMetrics theory_metrics(const BacktestConfig& config, const std::vector<double>& beta_hats);

/// Full pipeline: repetitions t = w-1 .. w+K-2 (0-based day indices), one
/// terminal wealth each, aggregated per Step 4.
struct BacktestReport {
    BacktestConfig config;
    int tau = 0;  // effective investment period
    std::vector<double> terminal_wealths;
    std::vector<double> beta_hats;
    int degenerate_count = 0;
    AggregateMetrics metrics;

    std::string flags() const;
};

BacktestReport run_backtest(const PriceSeries& a, const PriceSeries& b,
                            const BacktestConfig& config);

struct SweepRow {
    int L = 0;
    BacktestStrategy strategy = BacktestStrategy::I;
    int tau = 0;
    std::optional<AggregateMetrics> metrics;
    std::string error;  // row absent from results when non-empty
};

/// Runs strategies I, II and III for every L in the range, with
/// tau = ceil(250/L) and tau* = ceil(1/(theta_L^2-1)). When the base
/// config carries a positive fee, strategy I runs under the fee/loan
/// execution model.
std::vector<SweepRow> sweep_over_L(const PriceSeries& a, const PriceSeries& b,
                                   const BacktestConfig& base, const std::vector<int>& L_values);

}  // namespace mpmv
