#include "mpmv/market.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

namespace mpmv {

namespace {

void check_shapes(const MarketParams& p) {
    if (p.horizon_T < 1) throw std::invalid_argument("horizon_T must be >= 1");
    if (p.n_assets < 1) throw std::invalid_argument("n_assets must be >= 1");
    if (p.d_noise < 1) throw std::invalid_argument("d_noise must be >= 1");
    if (static_cast<int>(p.r.size()) != p.horizon_T ||
        static_cast<int>(p.b.size()) != p.horizon_T ||
        static_cast<int>(p.sigma.size()) != p.horizon_T)
        throw std::invalid_argument("schedule lengths must equal horizon_T");
    for (int s = 0; s < p.horizon_T; ++s) {
        if (p.b[s].size() != p.n_assets)
            throw std::invalid_argument("b(" + std::to_string(s) + ") has wrong size");
        if (p.sigma[s].rows() != p.n_assets || p.sigma[s].cols() != p.d_noise)
            throw std::invalid_argument("sigma(" + std::to_string(s) + ") has wrong shape");
    }
    if (!(p.delta > 0)) throw std::invalid_argument("delta must be > 0");
}

}  // namespace

MarketParams MarketParams::constant(int T, double r_const, const Vec& b_const,
                                    const Mat& sigma_const, double delta) {
    MarketParams p;
    p.horizon_T = T;
    p.n_assets = static_cast<int>(b_const.size());
    p.d_noise = static_cast<int>(sigma_const.cols());
    p.r.assign(static_cast<size_t>(std::max(T, 0)), r_const);
    p.b.assign(static_cast<size_t>(std::max(T, 0)), b_const);
    p.sigma.assign(static_cast<size_t>(std::max(T, 0)), sigma_const);
    p.delta = delta;
    check_shapes(p);
    return p;
}

MarketParams MarketParams::from_schedules(std::vector<double> r_sched, std::vector<Vec> b_sched,
                                          std::vector<Mat> sigma_sched, double delta) {
    MarketParams p;
    p.horizon_T = static_cast<int>(r_sched.size());
    p.n_assets = b_sched.empty() ? 0 : static_cast<int>(b_sched.front().size());
    p.d_noise = sigma_sched.empty() ? 0 : static_cast<int>(sigma_sched.front().cols());
    p.r = std::move(r_sched);
    p.b = std::move(b_sched);
    p.sigma = std::move(sigma_sched);
    p.delta = delta;
    check_shapes(p);
    return p;
}

MarketParams MarketParams::truncated(int new_T) const {
    if (new_T < 1 || new_T > horizon_T)
        throw std::invalid_argument("truncated horizon must be in [1, horizon_T]");
    MarketParams p = *this;
    p.horizon_T = new_T;
    p.r.resize(new_T);
    p.b.resize(new_T);
    p.sigma.resize(new_T);
    return p;
}

Vec MarketParams::gamma(int s) const {
    return b.at(s).array() - r.at(s);
}

std::string to_string(Assumption a) {
    switch (a) {
        case Assumption::RiskFreePositive: return "r(s) > 0";
        case Assumption::ExcessReturnNonzero: return "gamma(s) != 0";
        case Assumption::VolatilityGramPD: return "sigma(s) sigma(s)^T > delta I";
    }
    return "?";
}

std::string ValidationReport::to_string() const {
    if (pass()) return "all assumptions hold";
    std::ostringstream os;
    for (size_t i = 0; i < failures.size(); ++i) {
        if (i) os << "; ";
        os << failures[i].message;
    }
    return os.str();
}

ValidationReport validate(const MarketParams& params, double delta) {
    check_shapes(params);
    ValidationReport report;
    auto fail = [&](int s, Assumption a, const std::string& detail) {
        report.failures.push_back(
            {s, a, "period " + std::to_string(s) + ": " + to_string(a) + " violated (" + detail + ")"});
    };
    const int n = params.n_assets;
    for (int s = 0; s < params.horizon_T; ++s) {
        if (!(params.r[s] > 0.0))
            fail(s, Assumption::RiskFreePositive, "r = " + std::to_string(params.r[s]));
        const Vec g = params.gamma(s);
        if (g.isZero(0.0)) fail(s, Assumption::ExcessReturnNonzero, "b(s) equals r(s) 1");
        Mat gram = params.sigma[s] * params.sigma[s].transpose();
        gram.diagonal().array() -= delta;
        Eigen::LLT<Mat> llt(gram);
        if (llt.info() != Eigen::Success)
            fail(s, Assumption::VolatilityGramPD,
                 "Cholesky of sigma sigma^T - delta I failed, delta = " + std::to_string(delta) +
                     ", n = " + std::to_string(n));
    }
    return report;
}

ValidationReport validate(const MarketParams& params) {
    return validate(params, params.delta);
}

double r_prod(const MarketParams& params, int a, int b) {
    if (b < a) return 1.0;  // empty product
    // A non-empty range outside the schedule is a caller bug; reject rather than clamp.
    if (a < 0 || b >= params.horizon_T)
        throw std::invalid_argument("r_prod range [" + std::to_string(a) + ", " + std::to_string(b) +
                                    "] outside schedule of length " + std::to_string(params.horizon_T));
    double prod = 1.0;
    for (int s = a; s <= b; ++s) prod *= params.r[s];
    return prod;
}

std::vector<double> beta_schedule(const MarketParams& params) {
    return DerivedSchedules::compute(params).beta();
}

DerivedSchedules DerivedSchedules::compute(const MarketParams& params) {
    check_shapes(params);
    DerivedSchedules d;
    const int T = params.horizon_T;
    d.gamma_.reserve(T);
    d.risk_dir_.reserve(T);
    d.beta_.reserve(T);
    d.r_ = params.r;
    for (int s = 0; s < T; ++s) {
        if (!(params.r[s] > 0.0))
            throw AssumptionError("period " + std::to_string(s) + ": r(s) > 0 violated");
        Vec g = params.gamma(s);
        if (g.isZero(0.0))
            throw AssumptionError("period " + std::to_string(s) + ": gamma(s) != 0 violated");
        Mat gram = params.sigma[s] * params.sigma[s].transpose();
        Mat shifted = gram;
        shifted.diagonal().array() -= params.delta;
        Eigen::LLT<Mat> margin(shifted);
        if (margin.info() != Eigen::Success)
            throw AssumptionError("period " + std::to_string(s) +
                                  ": sigma sigma^T > delta I violated");
        Eigen::LLT<Mat> llt(gram);
        if (llt.info() != Eigen::Success)
            throw AssumptionError("period " + std::to_string(s) + ": sigma sigma^T not factorizable");
        Vec k = llt.solve(g);
        const double beta = g.dot(k);
        if (!(beta > 0.0) || !std::isfinite(beta))
            throw AssumptionError("period " + std::to_string(s) + ": beta(s) not positive");
        d.gamma_.push_back(std::move(g));
        d.risk_dir_.push_back(std::move(k));
        d.beta_.push_back(beta);
    }
    return d;
}

double DerivedSchedules::beta_sum(int a, int b) const {
    if (b < a) return 0.0;
    if (a < 0 || b >= horizon()) throw std::invalid_argument("beta_sum range outside schedule");
    double sum = 0.0;
    for (int s = a; s <= b; ++s) sum += beta_[s];
    return sum;
}

double DerivedSchedules::r_prod(int a, int b) const {
    if (b < a) return 1.0;
    if (a < 0 || b >= horizon()) throw std::invalid_argument("r_prod range outside schedule");
    double prod = 1.0;
    for (int s = a; s <= b; ++s) prod *= r_[s];
    return prod;
}

double DerivedSchedules::beta1_prod(int a, int b) const {
    if (b < a) return 1.0;
    if (a < 0 || b >= horizon()) throw std::invalid_argument("beta1_prod range outside schedule");
    double prod = 1.0;
    for (int s = a; s <= b; ++s) prod *= beta_[s] + 1.0;
    return prod;
}

}  // namespace mpmv
