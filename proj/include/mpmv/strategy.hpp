#pragma once

#include <vector>

#include "mpmv/market.hpp"

namespace mpmv {

enum class StrategyKind { Bellman, Precommitted, EqualWeight };

/// Per-period capital allocations to the n risky assets.
///
/// Three shapes share the type: the Bellman schedule stores one fixed
/// capital vector per period (state-independent by construction); the
/// pre-committed rule stores affine-in-wealth coefficients, because its
/// allocation depends on running wealth; the 1/n rule is wealth/n per
/// asset at any period.
struct StrategySchedule {
    StrategyKind kind = StrategyKind::Bellman;
    double mu = 0.0;  // risk aversion; meaningful for Bellman/pre-committed
    int start = 0;    // first period the schedule covers
    int n_assets = 0;

    std::vector<Vec> capitals;   // Bellman: capitals[s - start] = pi*(s)
    std::vector<Vec> intercept;  // pre-committed: pi0(s) = intercept + slope * wealth
    std::vector<Vec> slope;
    double lambda = 0.0;  // pre-committed Lagrange-style constant

    /// Number of periods covered; 0 for the unbounded 1/n rule.
    int length() const;
    bool state_dependent() const { return kind != StrategyKind::Bellman; }

    /// Capital vector invested in the risky assets at period s given
    /// current wealth.
    Vec allocation(int s, double wealth) const;
};

struct ValueFunctionParams {
    int t = 0;
    double x = 0.0;  // wealth-process initial value
    double y = 0.0;  // auxiliary mean-process initial value
};

/// State-independent optimal schedule on [t, T):
///   pi*(s) = (1/2mu) [sigma sigma^T]^{-1} gamma(s) / prod_{h=s+1}^{T-1} r(h).
/// The discount collects the rates the allocation still rides through; the
/// final period carries none (the one-period problem has no discounting).
StrategySchedule bellman_strategy(const MarketParams& params, double mu, int t = 0);

/// Closed-form optimal value
///   mu (x-y)^2 (prod r)^2 - x prod r - sum beta / (4 mu)
/// over periods [t, T). At t = T the empty conventions leave mu (x-y)^2 - x.
double value_function(const MarketParams& params, double mu, const ValueFunctionParams& v);

/// Risk aversion calibrated so the terminal mean under the Bellman
/// schedule equals L:  mu = sum beta / (2 (L - x prod r)).
/// Throws InfeasibleTargetError unless L > x prod r.
double mu_from_target(const MarketParams& params, int t, double x, double L);

/// Affine-in-wealth rule
///   pi0(s) = [sigma sigma^T]^{-1} gamma(s) / (1 + beta(s))
///            * (lambda / prod_{h=s+1}^{T-1} r(h) - r(s) X(s)),
/// lambda = prod (beta+1) / (2 mu) + x prod r, both products over [t, T).
/// For a single period the rule coincides with the Bellman allocation.
StrategySchedule precommitted_strategy(const MarketParams& params, double mu, int t, double x);

/// The 1/n rule: wealth/n in each risky asset, any period.
StrategySchedule equal_weight_rule(int n);

}  // namespace mpmv
