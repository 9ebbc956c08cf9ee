#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mpmv/errors.hpp"

namespace mpmv {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Deterministic market coefficients for periods 0 .. horizon_T-1: one
/// risk-free gross return r(s), a vector b(s) of expected gross returns of
/// the n risky assets and an n x d volatility loading sigma(s).
///
/// Schedules may be supplied as constants (expanded internally) or as
/// per-period arrays. Factories check shapes only; the standing
/// assumptions are checked by validate() and enforced when
/// DerivedSchedules is built.
struct MarketParams {
    int horizon_T = 0;
    int n_assets = 0;
    int d_noise = 0;
    std::vector<double> r;   // size horizon_T
    std::vector<Vec> b;      // size horizon_T, each n_assets
    std::vector<Mat> sigma;  // size horizon_T, each n_assets x d_noise
    double delta = 1e-10;    // positive-definiteness margin for sigma sigma^T

    /// Time-constant coefficients expanded over T periods.
    static MarketParams constant(int T, double r_const, const Vec& b_const,
                                 const Mat& sigma_const, double delta = 1e-10);

    /// Fully scheduled coefficients; sizes must agree.
    static MarketParams from_schedules(std::vector<double> r_sched, std::vector<Vec> b_sched,
                                       std::vector<Mat> sigma_sched, double delta = 1e-10);

    /// The same market restricted to periods 0 .. new_T-1.
    MarketParams truncated(int new_T) const;

    /// Excess return gamma(s) = b(s) - r(s) 1.
    Vec gamma(int s) const;
};

enum class Assumption {
    RiskFreePositive,     // r(s) > 0
    ExcessReturnNonzero,  // gamma(s) != 0
    VolatilityGramPD,     // sigma(s) sigma(s)^T - delta I positive definite
};

std::string to_string(Assumption a);

struct ValidationFailure {
    int period = 0;
    Assumption assumption = Assumption::RiskFreePositive;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationFailure> failures;
    bool pass() const { return failures.empty(); }
    std::string to_string() const;
};

/// Checks the standing assumptions period by period. Never throws; every
/// violation is reported with the period and the assumption it breaks.
/// Positive definiteness is tested through Cholesky factorization of
/// sigma sigma^T - delta I, not through eigenvalues.
ValidationReport validate(const MarketParams& params, double delta);
ValidationReport validate(const MarketParams& params);

/// Product of r(s) over s in [a, b]; 1 when b < a.
double r_prod(const MarketParams& params, int a, int b);

/// Per-period beta(s) = gamma(s) [sigma(s) sigma(s)^T]^{-1} gamma(s)^T,
/// via a symmetric positive-definite solve. Throws AssumptionError when a
/// period's Gram matrix is not positive definite.
std::vector<double> beta_schedule(const MarketParams& params);

/// Quantities derived once from a validated market and shared by the
/// strategy, frontier, horizon and simulation code. Immutable after
/// construction; safe to share across threads.
class DerivedSchedules {
public:
    /// Throws AssumptionError if any standing assumption fails.
    static DerivedSchedules compute(const MarketParams& params);

    int horizon() const { return static_cast<int>(beta_.size()); }
    const Vec& gamma(int s) const { return gamma_.at(s); }
    /// [sigma(s) sigma(s)^T]^{-1} gamma(s), the direction every optimal
    /// strategy scales.
    const Vec& risk_dir(int s) const { return risk_dir_.at(s); }
    double beta(int s) const { return beta_.at(s); }
    const std::vector<double>& beta() const { return beta_; }

    /// Sum of beta over [a, b]; 0 when b < a.
    double beta_sum(int a, int b) const;
    /// Product of r over [a, b]; 1 when b < a.
    double r_prod(int a, int b) const;
    /// Product of beta(h)+1 over [a, b]; 1 when b < a.
    double beta1_prod(int a, int b) const;

private:
    std::vector<Vec> gamma_;
    std::vector<Vec> risk_dir_;
    std::vector<double> beta_;
    std::vector<double> r_;
};

}  // namespace mpmv
