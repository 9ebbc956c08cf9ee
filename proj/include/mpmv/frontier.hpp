#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "mpmv/market.hpp"

namespace mpmv {

/// Mean and variance of the optimally controlled wealth per period,
/// s = t .. T, with the generating (mu, x, t) attached.
/// mean/variance[k] corresponds to period s = t + k.
struct FrontierCurve {
    int t = 0;
    double mu = 0.0;
    double x = 0.0;
    std::vector<double> mean;
    std::vector<double> variance;

    int periods() const { return static_cast<int>(mean.size()); }
    double mean_at(int s) const { return mean.at(s - t); }
    double variance_at(int s) const { return variance.at(s - t); }

    /// CSV rows "s,mean,variance", full precision.
    void to_csv(std::ostream& os) const;
};

/// Iterates the mean/variance difference equations of the optimal wealth
/// from (x, 0) and cross-checks every period against the closed forms;
/// a discrepancy beyond 1e-8 raises ConsistencyError. The recursion
/// values are returned.
FrontierCurve frontier_recursion(const MarketParams& params, double mu, int t, double x);

/// Minimal attainable variance at period s for a given target mean:
///   (target - x prod_{h=t}^{s-1} r)^2 / sum_{h=t}^{s-1} beta.
double efficient_frontier_variance(const MarketParams& params, int t, int s, double x,
                                   double target_mean);

struct PrecommittedFrontierPoint {
    double variance = 0.0;
    double lambda = 0.0;
};

/// Terminal variance of the pre-committed strategy at a given terminal
/// mean: (target - x prod r)^2 / (prod (beta+1) - 1), with its lambda.
PrecommittedFrontierPoint precommitted_frontier(const MarketParams& params, int t, double x,
                                                double target_mean);

struct FixedTarget {
    double L;
};
struct FixedMu {
    double mu;
};
using ComparisonMode = std::variant<FixedTarget, FixedMu>;

/// Terminal means/variances of the Bellman and pre-committed strategies
/// under a common target mean or a common risk aversion. Gaps are signed
/// (bellman minus pre-committed) so the single-period equality case stays
/// representable.
struct ComparisonReport {
    double mean_bellman = 0.0;
    double var_bellman = 0.0;
    double mean_pre = 0.0;
    double var_pre = 0.0;
    double mean_gap = 0.0;  // mean_bellman - mean_pre
    double var_gap = 0.0;   // var_bellman  - var_pre
};

ComparisonReport compare_strategies(const MarketParams& params, int t, double x,
                                    const ComparisonMode& mode);

}  // namespace mpmv
