#include "mpmv/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace mpmv {

namespace {

void require_mu(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("risk aversion mu must be > 0");
}

void require_start(const MarketParams& params, int t) {
    if (t < 0 || t > params.horizon_T)
        throw std::domain_error("start period t must lie in [0, horizon_T]");
}

}  // namespace

int StrategySchedule::length() const {
    switch (kind) {
        case StrategyKind::Bellman: return static_cast<int>(capitals.size());
        case StrategyKind::Precommitted: return static_cast<int>(intercept.size());
        case StrategyKind::EqualWeight: return 0;
    }
    return 0;
}

Vec StrategySchedule::allocation(int s, double wealth) const {
    switch (kind) {
        case StrategyKind::Bellman:
            return capitals.at(s - start);
        case StrategyKind::Precommitted:
            return intercept.at(s - start) + slope.at(s - start) * wealth;
        case StrategyKind::EqualWeight:
            return Vec::Constant(n_assets, wealth / n_assets);
    }
    throw std::logic_error("unknown strategy kind");
}

StrategySchedule bellman_strategy(const MarketParams& params, double mu, int t) {
    require_mu(mu);
    require_start(params, t);
    const auto d = DerivedSchedules::compute(params);
    StrategySchedule sched;
    sched.kind = StrategyKind::Bellman;
    sched.mu = mu;
    sched.start = t;
    sched.n_assets = params.n_assets;
    sched.capitals.reserve(params.horizon_T - t);
    // Walk s from T-1 down so the discount product grows one factor at a
    // time. The allocation at s is discounted by the rates it still has to
    // ride through, prod_{h=s+1}^{T-1} r(h); the final period carries none.
    std::vector<Vec> rev;
    double disc = 1.0;  // prod_{h=s+1}^{T-1} r(h)
    for (int s = params.horizon_T - 1; s >= t; --s) {
        rev.push_back(d.risk_dir(s) / (2.0 * mu * disc));
        disc *= params.r[s];
    }
    for (auto it = rev.rbegin(); it != rev.rend(); ++it) sched.capitals.push_back(std::move(*it));
    return sched;
}

double value_function(const MarketParams& params, double mu, const ValueFunctionParams& v) {
    require_mu(mu);
    require_start(params, v.t);
    const auto d = DerivedSchedules::compute(params);
    const double prod = d.r_prod(v.t, params.horizon_T - 1);
    const double beta_sum = d.beta_sum(v.t, params.horizon_T - 1);
    const double diff = v.x - v.y;
    return mu * diff * diff * prod * prod - v.x * prod - beta_sum / (4.0 * mu);
}

double mu_from_target(const MarketParams& params, int t, double x, double L) {
    require_start(params, t);
    const auto d = DerivedSchedules::compute(params);
    const double riskfree = x * d.r_prod(t, params.horizon_T - 1);
    if (!(L > riskfree))
        throw InfeasibleTargetError(
            "target mean " + std::to_string(L) + " must exceed the risk-free terminal wealth " +
                std::to_string(riskfree) + " (= x * prod r); no positive mu attains it",
            riskfree);
    return d.beta_sum(t, params.horizon_T - 1) / (2.0 * (L - riskfree));
}

StrategySchedule precommitted_strategy(const MarketParams& params, double mu, int t, double x) {
    require_mu(mu);
    require_start(params, t);
    const auto d = DerivedSchedules::compute(params);
    const int T = params.horizon_T;
    StrategySchedule sched;
    sched.kind = StrategyKind::Precommitted;
    sched.mu = mu;
    sched.start = t;
    sched.n_assets = params.n_assets;
    sched.lambda = d.beta1_prod(t, T - 1) / (2.0 * mu) + x * d.r_prod(t, T - 1);
    // pi0(s) = [sigma sigma^T]^{-1} gamma(s) / (1 + beta(s))
    //          * (lambda / prod_{h=s+1}^{T-1} r(h) - r(s) X(s)).
    // The 1/(1+beta) feedback gain and the one-period-shorter discount are
    // what make the rule attain the pre-committed frontier; a one-step
    // quadratic minimization reproduces both.
    std::vector<Vec> rev_i, rev_s;
    double disc = 1.0;  // prod_{h=s+1}^{T-1} r(h)
    for (int s = T - 1; s >= t; --s) {
        const double gain = 1.0 / (1.0 + d.beta(s));
        rev_i.push_back(d.risk_dir(s) * (gain * sched.lambda / disc));
        rev_s.push_back(-d.risk_dir(s) * (gain * params.r[s]));
        disc *= params.r[s];
    }
    for (auto it = rev_i.rbegin(); it != rev_i.rend(); ++it) sched.intercept.push_back(std::move(*it));
    for (auto it = rev_s.rbegin(); it != rev_s.rend(); ++it) sched.slope.push_back(std::move(*it));
    return sched;
}

StrategySchedule equal_weight_rule(int n) {
    if (n < 1) throw std::domain_error("equal-weight rule needs n >= 1 assets");
    StrategySchedule sched;
    sched.kind = StrategyKind::EqualWeight;
    sched.n_assets = n;
    return sched;
}

}  // namespace mpmv
