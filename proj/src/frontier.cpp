#include "mpmv/frontier.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace mpmv {

namespace {

void require_mu(double mu) {
    if (!(mu > 0.0)) throw std::domain_error("risk aversion mu must be > 0");
}

double rel_scale(double a, double b) {
    return std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

void FrontierCurve::to_csv(std::ostream& os) const {
    os << "s,mean,variance\n";
    char line[96];
    for (int k = 0; k < periods(); ++k) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g\n", t + k, mean[k], variance[k]);
        os << line;
    }
}

FrontierCurve frontier_recursion(const MarketParams& params, double mu, int t, double x) {
    require_mu(mu);
    if (t < 0 || t >= params.horizon_T)
        throw std::domain_error("start period t must lie in [0, horizon_T)");
    const auto d = DerivedSchedules::compute(params);
    const int T = params.horizon_T;

    // back[s - t] = prod_{h=s}^{T-1} r(h); back[T - t] = 1.
    std::vector<double> back(T - t + 1, 1.0);
    for (int s = T - 1; s >= t; --s) back[s - t] = params.r[s] * back[s - t + 1];

    FrontierCurve curve;
    curve.t = t;
    curve.mu = mu;
    curve.x = x;
    curve.mean.reserve(T - t + 1);
    curve.variance.reserve(T - t + 1);
    curve.mean.push_back(x);
    curve.variance.push_back(0.0);

    double mean = x;
    double var = 0.0;
    double fwd_prod = 1.0;  // prod_{h=t}^{s-1} r(h), for the closed form
    double beta_over_2mu = 0.0;
    double beta_over_4mu2 = 0.0;
    for (int s = t + 1; s <= T; ++s) {
        // The allocation acting over [s-1, s) is discounted by the rates
        // still ahead of it, so the drift carries (prod_{h=s}^{T-1} r)^{-1}.
        const double inv_disc = 1.0 / back[s - t];
        mean = params.r[s - 1] * mean + d.beta(s - 1) / (2.0 * mu) * inv_disc;
        var = params.r[s - 1] * params.r[s - 1] * var +
              d.beta(s - 1) / (4.0 * mu * mu) * inv_disc * inv_disc;

        // Closed forms, accumulated alongside.
        fwd_prod *= params.r[s - 1];
        beta_over_2mu += d.beta(s - 1) / (2.0 * mu);
        beta_over_4mu2 += d.beta(s - 1) / (4.0 * mu * mu);
        const double tail_inv = 1.0 / back[s - t];
        const double mean_cf = x * fwd_prod + tail_inv * beta_over_2mu;
        const double var_cf = tail_inv * tail_inv * beta_over_4mu2;
        if (std::abs(mean - mean_cf) > 1e-8 * rel_scale(mean, mean_cf) ||
            std::abs(var - var_cf) > 1e-8 * rel_scale(var, var_cf))
            throw ConsistencyError("frontier recursion and closed form disagree at period " +
                                   std::to_string(s));

        curve.mean.push_back(mean);
        curve.variance.push_back(var);
    }
    return curve;
}

double efficient_frontier_variance(const MarketParams& params, int t, int s, double x,
                                   double target_mean) {
    if (s <= t) throw std::domain_error("efficient frontier needs s > t");
    const auto d = DerivedSchedules::compute(params);
    const double beta_sum = d.beta_sum(t, s - 1);
    if (!(beta_sum > 0.0))
        throw AssumptionError("sum of beta over [" + std::to_string(t) + ", " + std::to_string(s - 1) +
                              "] is zero; the frontier is degenerate");
    const double excess = target_mean - x * d.r_prod(t, s - 1);
    return excess * excess / beta_sum;
}

PrecommittedFrontierPoint precommitted_frontier(const MarketParams& params, int t, double x,
                                                double target_mean) {
    const auto d = DerivedSchedules::compute(params);
    const int T = params.horizon_T;
    const double denom = d.beta1_prod(t, T - 1) - 1.0;
    if (!(denom > 0.0))
        throw AssumptionError("prod (beta+1) - 1 is zero over [" + std::to_string(t) + ", " +
                              std::to_string(T - 1) + "]; the pre-committed frontier is degenerate");
    const double excess = target_mean - x * d.r_prod(t, T - 1);
    PrecommittedFrontierPoint p;
    p.variance = excess * excess / denom;
    // Terminal mean E = x prod r + (prod(beta+1)-1)/(2mu)  =>  mu = denom / (2 excess),
    // and lambda = prod(beta+1)/(2mu) + x prod r.
    p.lambda = (excess > 0.0)
                   ? d.beta1_prod(t, T - 1) * excess / denom + x * d.r_prod(t, T - 1)
                   : x * d.r_prod(t, T - 1);
    return p;
}

ComparisonReport compare_strategies(const MarketParams& params, int t, double x,
                                    const ComparisonMode& mode) {
    const auto d = DerivedSchedules::compute(params);
    const int T = params.horizon_T;
    const double riskfree = x * d.r_prod(t, T - 1);
    const double beta_sum = d.beta_sum(t, T - 1);
    const double pre_denom = d.beta1_prod(t, T - 1) - 1.0;
    if (!(beta_sum > 0.0) || !(pre_denom > 0.0))
        throw AssumptionError("degenerate beta schedule; comparison undefined");

    ComparisonReport rep;
    if (const auto* fixed = std::get_if<FixedTarget>(&mode)) {
        const double L = fixed->L;
        if (!(L > riskfree))
            throw InfeasibleTargetError("comparison target must exceed the risk-free terminal wealth " +
                                            std::to_string(riskfree),
                                        riskfree);
        const double excess = L - riskfree;
        rep.mean_bellman = L;
        rep.mean_pre = L;
        rep.var_bellman = excess * excess / beta_sum;
        rep.var_pre = excess * excess / pre_denom;
    } else {
        const double mu = std::get<FixedMu>(mode).mu;
        require_mu(mu);
        rep.mean_bellman = riskfree + beta_sum / (2.0 * mu);
        rep.var_bellman = beta_sum / (4.0 * mu * mu);
        rep.mean_pre = riskfree + pre_denom / (2.0 * mu);
        rep.var_pre = pre_denom / (4.0 * mu * mu);
    }
    rep.mean_gap = rep.mean_bellman - rep.mean_pre;
    rep.var_gap = rep.var_bellman - rep.var_pre;
    return rep;
}

}  // namespace mpmv
