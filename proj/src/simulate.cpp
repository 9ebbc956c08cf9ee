#include "mpmv/simulate.hpp"

#include <cmath>
#include <stdexcept>

#include "mpmv/rng.hpp"

namespace mpmv {

void SimConfig::check() const {
    if (n_paths < 1) throw std::domain_error("n_paths must be >= 1");
    if (horizon < 1) throw std::domain_error("horizon must be >= 1");
    if (strategy.start < 0 || strategy.start + horizon > params.horizon_T)
        throw std::domain_error("simulation window exceeds the market schedule");
    if (!strategy.state_dependent() && horizon > strategy.length())
        throw std::domain_error("horizon exceeds the deterministic strategy length");
    if (strategy.kind == StrategyKind::Precommitted && horizon > strategy.length())
        throw std::domain_error("horizon exceeds the pre-committed schedule length");
    if (strategy.n_assets != params.n_assets)
        throw std::domain_error("strategy and market disagree on the number of assets");
}

std::vector<double> simulate_terminal_wealth(const SimConfig& config) {
    config.check();
    const auto d = DerivedSchedules::compute(
        config.params.truncated(config.strategy.start + config.horizon));
    const int t0 = config.strategy.start;
    const int dn = config.params.d_noise;
    const double sign = config.negate_noise ? -1.0 : 1.0;

    std::vector<double> terminal(config.n_paths);
    Vec dW(dn);
    for (int m = 0; m < config.n_paths; ++m) {
        double wealth = config.x;
        for (int s = t0; s < t0 + config.horizon; ++s) {
            const Vec pi = config.strategy.allocation(s, wealth);
            for (int j = 0; j < dn; ++j)
                dW[j] = sign * rng::normal(config.seed, static_cast<uint64_t>(m),
                                           static_cast<uint64_t>(s), static_cast<uint64_t>(j));
            wealth = config.params.r[s] * wealth + d.gamma(s).dot(pi) +
                     (config.params.sigma[s].transpose() * pi).dot(dW);
        }
        terminal[m] = wealth;
    }
    return terminal;
}

SimResult simulate_wealth(const SimConfig& config) {
    const std::vector<double> terminal = simulate_terminal_wealth(config);
    const int M = static_cast<int>(terminal.size());
    double sum = 0.0;
    for (double v : terminal) sum += v;
    const double mean = sum / M;
    double ss = 0.0;
    for (double v : terminal) ss += (v - mean) * (v - mean);

    SimResult res;
    res.sample_mean = mean;
    res.sample_variance = ss / M;  // divisor M
    res.std_error = (M > 1) ? std::sqrt(ss / M / (M - 1)) : 0.0;
    res.n_paths = M;
    res.seed = config.seed;
    return res;
}

std::vector<SimTableRow> simulate_table(const std::vector<SimConfig>& configs) {
    std::vector<SimTableRow> rows;
    rows.reserve(configs.size());
    for (const auto& config : configs) {
        SimTableRow row;
        try {
            row.result = simulate_wealth(config);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace mpmv
