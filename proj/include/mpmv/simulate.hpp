#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpmv/market.hpp"
#include "mpmv/strategy.hpp"

namespace mpmv {

/// One seeded Monte Carlo run of the wealth dynamics
///   X(s) = r(s-1) X(s-1) + gamma(s-1).pi(s-1) + pi(s-1)^T sigma(s-1) dW(s-1)
/// under a given allocation rule.
struct SimConfig {
    MarketParams params;
    StrategySchedule strategy;
    double x = 1.0;
    int horizon = 0;  // periods simulated, starting at strategy.start
    int n_paths = 1;  // M
    uint64_t seed = 0;
    /// Flips the sign of every noise increment; a run averaged with its
    /// negated twin is the antithetic estimator.
    bool negate_noise = false;

    void check() const;
};

struct SimResult {
    double sample_mean = 0.0;      // R, divisor M
    double sample_variance = 0.0;  // V, divisor M (not M-1)
    double std_error = 0.0;        // of the mean: sqrt(V / (M-1)); 0 when M = 1
    int n_paths = 0;
    uint64_t seed = 0;
};

/// Runs the config; noise is a pure function of (seed, path, period), so
/// the result is reproducible and independent of evaluation order.
SimResult simulate_wealth(const SimConfig& config);

/// Terminal wealth of every path, in path order (shares the estimator's
/// noise stream).
std::vector<double> simulate_terminal_wealth(const SimConfig& config);

struct SimTableRow {
    std::optional<SimResult> result;
    std::string error;  // empty on success
};

/// Batch runner; rows keep the input order and per-row failures are
/// reported in place instead of aborting the table.
std::vector<SimTableRow> simulate_table(const std::vector<SimConfig>& configs);

}  // namespace mpmv
