#pragma once

#include <vector>

#include "mpmv/market.hpp"
#include "mpmv/strategy.hpp"

namespace mpmv {

/// Inputs of the varying-investment-period model: the moving target
///   g(tau) = x prod_{h<tau} r(h) + alpha x prod_{h<tau} theta(h)
/// with alpha > 0 and theta(.) > 1, and a cap on the horizon search.
struct HorizonSpec {
    double alpha = 0.0;
    std::vector<double> theta;  // per-period; use constant() to expand a scalar
    int tau_max = 10000;
    double x = 1.0;

    static HorizonSpec constant(double alpha, double theta_const, int tau_max = 10000,
                                double x = 1.0);
    static HorizonSpec scheduled(double alpha, std::vector<double> theta_sched,
                                 int tau_max = 10000, double x = 1.0);

    double theta_at(int s) const;  // clamps a 1-element schedule to all s
    bool theta_constant() const;
    void check() const;  // alpha > 0, theta(.) > 1, tau_max >= 1
};

/// g(tau). tau must be >= 1.
double target_mean(const HorizonSpec& spec, const MarketParams& params, int tau);

/// Minimized variance at horizon tau under the target g(tau):
///   J(tau) = alpha^2 x^2 (prod theta)^2 / sum beta,  over [0, tau).
double horizon_objective(const HorizonSpec& spec, const MarketParams& params, int tau);

struct OptimalTau {
    int tau_star = 0;
    double objective = 0.0;
    /// True when the scan hit its cap while J was still decreasing, so the
    /// minimum may lie beyond the scanned range.
    bool truncated = false;
    /// J(tau) for tau = 1 .. scanned end (J[k] is tau = k+1).
    std::vector<double> objectives;
};

/// Scans J(tau) for tau in [1, tau_max] (bounded by the market and theta
/// schedule lengths), tracking the argmin; ties resolve to the smaller
/// tau. The sign of J(tau+1) - J(tau) equals the sign of
/// (theta(tau)^2 - 1) sum_{h<tau} beta(h) - beta(tau), so for constant
/// coefficients the scan stops at the first nonnegative difference; for
/// scheduled coefficients every tau in range is evaluated rather than
/// trusting unimodality.
OptimalTau optimal_tau(const HorizonSpec& spec, const MarketParams& params);

struct StrategyIIResult {
    StrategySchedule schedule;  // Bellman schedule on [0, tau_star)
    int tau_star = 0;
    double mu = 0.0;
    double target = 0.0;  // g(tau_star)
    bool truncated = false;
};

/// Optimal-horizon strategy: finds tau*, calibrates mu so the mean hits
/// g(tau*) at tau*, and returns the Bellman schedule on [0, tau*).
StrategyIIResult strategy_II(const HorizonSpec& spec, const MarketParams& params);

}  // namespace mpmv
