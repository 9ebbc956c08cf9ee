#include "mpmv/horizon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpmv {

HorizonSpec HorizonSpec::constant(double alpha, double theta_const, int tau_max, double x) {
    HorizonSpec spec;
    spec.alpha = alpha;
    spec.theta.assign(1, theta_const);
    spec.tau_max = tau_max;
    spec.x = x;
    spec.check();
    return spec;
}

HorizonSpec HorizonSpec::scheduled(double alpha, std::vector<double> theta_sched, int tau_max,
                                   double x) {
    HorizonSpec spec;
    spec.alpha = alpha;
    spec.theta = std::move(theta_sched);
    spec.tau_max = tau_max;
    spec.x = x;
    spec.check();
    return spec;
}

double HorizonSpec::theta_at(int s) const {
    if (theta.size() == 1) return theta.front();
    return theta.at(s);
}

bool HorizonSpec::theta_constant() const {
    if (theta.size() == 1) return true;
    return std::all_of(theta.begin(), theta.end(),
                       [&](double v) { return v == theta.front(); });
}

void HorizonSpec::check() const {
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be > 0");
    if (theta.empty()) throw std::domain_error("theta schedule must not be empty");
    for (double v : theta)
        if (!(v > 1.0)) throw std::domain_error("theta(s) must be > 1");
    if (tau_max < 1) throw std::domain_error("tau_max must be >= 1");
}

namespace {

int scan_cap(const HorizonSpec& spec, const MarketParams& params) {
    int cap = std::min(spec.tau_max, params.horizon_T);
    if (spec.theta.size() > 1) cap = std::min<int>(cap, static_cast<int>(spec.theta.size()));
    return cap;
}

}  // namespace

double target_mean(const HorizonSpec& spec, const MarketParams& params, int tau) {
    spec.check();
    if (tau < 1) throw std::domain_error("tau must be >= 1");
    double r_prod_v = r_prod(params, 0, tau - 1);
    double theta_prod = 1.0;
    for (int h = 0; h < tau; ++h) theta_prod *= spec.theta_at(h);
    return spec.x * r_prod_v + spec.alpha * spec.x * theta_prod;
}

double horizon_objective(const HorizonSpec& spec, const MarketParams& params, int tau) {
    spec.check();
    if (tau < 1) throw std::domain_error("tau must be >= 1");
    const auto d = DerivedSchedules::compute(params.truncated(tau));
    const double beta_sum = d.beta_sum(0, tau - 1);
    if (!(beta_sum > 0.0)) throw AssumptionError("sum of beta over [0, tau) is zero");
    double theta_prod = 1.0;
    for (int h = 0; h < tau; ++h) theta_prod *= spec.theta_at(h);
    const double ax = spec.alpha * spec.x;
    return ax * ax * theta_prod * theta_prod / beta_sum;
}

OptimalTau optimal_tau(const HorizonSpec& spec, const MarketParams& params) {
    spec.check();
    const int cap = scan_cap(spec, params);
    const auto d = DerivedSchedules::compute(params.truncated(cap));
    const bool constant_case = spec.theta_constant() &&
                               std::equal(d.beta().begin() + 1, d.beta().end(), d.beta().begin());

    OptimalTau result;
    result.objectives.reserve(cap);
    const double ax = spec.alpha * spec.x;
    double theta_prod = 1.0;
    double beta_sum = 0.0;
    double best = 0.0;
    bool condition_met = false;  // (theta(tau)^2 - 1) sum_{h<tau} beta - beta(tau) >= 0
    int scanned = 0;
    for (int tau = 1; tau <= cap; ++tau) {
        theta_prod *= spec.theta_at(tau - 1);
        beta_sum += d.beta(tau - 1);
        const double J = ax * ax * theta_prod * theta_prod / beta_sum;
        result.objectives.push_back(J);
        if (tau == 1 || J < best) {
            best = J;
            result.tau_star = tau;
        }
        scanned = tau;
        if (tau < cap) {
            const double th = spec.theta_at(tau);
            condition_met = (th * th - 1.0) * beta_sum - d.beta(tau) >= 0.0;
            // In the constant case the condition is monotone in tau, so its
            // first trigger is final and the scan can stop.
            if (constant_case && condition_met) break;
        }
    }
    result.objective = best;
    // Truncated: the scan hit its cap with the last difference still
    // negative, so a lower J beyond the scanned range cannot be ruled out.
    result.truncated = (scanned == cap) && !condition_met;
    return result;
}

StrategyIIResult strategy_II(const HorizonSpec& spec, const MarketParams& params) {
    const OptimalTau opt = optimal_tau(spec, params);
    StrategyIIResult out;
    out.tau_star = opt.tau_star;
    out.truncated = opt.truncated;
    out.target = target_mean(spec, params, opt.tau_star);
    const MarketParams sub = params.truncated(opt.tau_star);
    out.mu = mu_from_target(sub, 0, spec.x, out.target);
    out.schedule = bellman_strategy(sub, out.mu, 0);
    return out;
}

}  // namespace mpmv
