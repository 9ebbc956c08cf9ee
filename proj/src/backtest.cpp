#include "mpmv/backtest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mpmv/rng.hpp"

namespace mpmv {

namespace {

bool valid_iso_date(const std::string& d) {
    if (d.size() != 10 || d[4] != '-' || d[7] != '-') return false;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    const int month = (d[5] - '0') * 10 + (d[6] - '0');
    const int day = (d[8] - '0') * 10 + (d[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string next_day(const std::string& iso) {
    int y = std::stoi(iso.substr(0, 4));
    int m = std::stoi(iso.substr(5, 2));
    int d = std::stoi(iso.substr(8, 2));
    static const int len[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    const int month_len = (m == 2 && leap) ? 29 : len[m - 1];
    if (++d > month_len) {
        d = 1;
        if (++m > 12) {
            m = 1;
            ++y;
        }
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

void require_day_index(const PriceSeries& s, int i, const std::string& what) {
    if (i < 0 || i >= s.size())
        throw DataError(what + ": day index " + std::to_string(i) + " outside series '" + s.label +
                        "' of length " + std::to_string(s.size()));
}

}  // namespace

PriceSeries make_series(std::string label, std::vector<PricePoint> points) {
    for (size_t i = 0; i < points.size(); ++i) {
        if (!valid_iso_date(points[i].date))
            throw DataError("series '" + label + "' row " + std::to_string(i + 1) +
                            ": date '" + points[i].date + "' is not ISO-8601 YYYY-MM-DD");
        if (!(points[i].close > 0.0))
            throw DataError("series '" + label + "' row " + std::to_string(i + 1) +
                            ": price must be strictly positive");
        if (i > 0 && !(points[i - 1].date < points[i].date))
            throw DataError("series '" + label + "' row " + std::to_string(i + 1) +
                            ": dates must be strictly increasing ('" + points[i - 1].date +
                            "' then '" + points[i].date + "')");
    }
    PriceSeries s;
    s.label = std::move(label);
    s.points = std::move(points);
    return s;
}

PriceSeries load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open price file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("price file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,close")
        throw DataError("price file '" + path + "' line 1: expected header 'date,close', got '" +
                        line + "'");
    std::vector<PricePoint> points;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError("price file '" + path + "' line " + std::to_string(lineno) +
                            ": expected 'date,close'");
        PricePoint p;
        p.date = line.substr(0, comma);
        const std::string num = line.substr(comma + 1);
        size_t used = 0;
        try {
            p.close = std::stod(num, &used);
        } catch (const std::exception&) {
            throw DataError("price file '" + path + "' line " + std::to_string(lineno) +
                            ": cannot parse price '" + num + "'");
        }
        if (used != num.size())
            throw DataError("price file '" + path + "' line " + std::to_string(lineno) +
                            ": trailing characters after price '" + num + "'");
        points.push_back(std::move(p));
    }
    return make_series(path, std::move(points));
}

void write_prices(const PriceSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write price file '" + path + "'");
    out << "date,close\n";
    char buf[64];
    for (const auto& p : series.points) {
        std::snprintf(buf, sizeof buf, "%.17g", p.close);
        out << p.date << ',' << buf << '\n';
    }
}

PriceSeries synthetic_prices(std::string label, double b, double sigma, int days, double p0,
                             uint64_t seed, uint64_t asset_tag) {
    if (days < 1) throw std::domain_error("synthetic series needs days >= 1");
    if (!(p0 > 0.0)) throw std::domain_error("initial price must be positive");
    std::vector<PricePoint> points;
    points.reserve(days);
    std::string date = "2009-08-03";
    double price = p0;
    for (int s = 0; s < days; ++s) {
        if (s > 0) {
            const double z = rng::normal(seed, asset_tag, static_cast<uint64_t>(s), 0);
            price *= b + sigma * z;
            if (!(price > 0.0))
                throw std::domain_error("synthetic price became non-positive; shrink sigma");
            date = next_day(date);
        }
        points.push_back({date, price});
    }
    return make_series(std::move(label), std::move(points));
}

std::string to_string(BacktestStrategy s) {
    switch (s) {
        case BacktestStrategy::I: return "I";
        case BacktestStrategy::II: return "II";
        case BacktestStrategy::III: return "III";
        case BacktestStrategy::I_costs: return "I_costs";
    }
    return "?";
}

int BacktestConfig::tau_default() const {
    return static_cast<int>(std::ceil(250.0 / L));
}

int BacktestConfig::tau_star() const {
    const double tl = theta_L();
    return static_cast<int>(std::ceil(1.0 / (tl * tl - 1.0)));
}

int BacktestConfig::tau_effective() const {
    if (strategy == BacktestStrategy::II) return tau_star();
    return tau > 0 ? tau : tau_default();
}

double BacktestConfig::target(int tau_periods) const {
    return x * std::pow(r_L(), tau_periods) + alpha * x * std::pow(theta_L(), tau_periods);
}

void BacktestConfig::check() const {
    if (L < 1) throw std::domain_error("L must be >= 1");
    if (m0 < 2) throw std::domain_error("m0 must be >= 2 (window variance undefined below)");
    if (tau < 0) throw std::domain_error("tau must be >= 1 (or 0 for the ceil(250/L) default)");
    if (K < 1) throw std::domain_error("K must be >= 1");
    if (!(r > 0.0)) throw std::domain_error("daily risk-free gross return must be > 0");
    if (!(theta > 1.0)) throw std::domain_error("theta must be > 1");
    if (!(alpha > 0.0)) throw std::domain_error("alpha must be > 0");
    if (!(x > 0.0)) throw std::domain_error("initial wealth must be > 0");
    if (fee < 0.0) throw std::domain_error("fee rate must be >= 0");
    if (loan < r) throw std::domain_error("loan rate must be >= the risk-free rate");
    if (!(r_L() > 0.0)) throw std::domain_error("L-day risk-free gross return must stay positive");
}

EstimatedParams estimate_params(const PriceSeries& a, const PriceSeries& b, int t, int L, int m0,
                                double r_daily) {
    if (L < 1) throw std::domain_error("L must be >= 1");
    if (m0 < 2) throw std::domain_error("m0 must be >= 2 (sample variance needs it)");
    const int w = m0 * L + 1;
    if (t + 1 < w)
        throw std::domain_error("estimation at day " + std::to_string(t) + " needs " +
                                std::to_string(w) + " trailing prices (window w = m0 L + 1)");
    require_day_index(a, t, "estimation");
    require_day_index(b, t, "estimation");

    const double r_L = 1.0 + (r_daily - 1.0) * L;
    EstimatedParams est;
    const PriceSeries* series[2] = {&a, &b};
    for (int k = 0; k < 2; ++k) {
        const PriceSeries& p = *series[k];
        // L-day aggregated simple returns I(t, s), s = 1..m0.
        std::vector<double> agg(m0, 0.0);
        for (int s = 0; s < m0; ++s)
            for (int i = 1; i <= L; ++i) {
                const int j = t - m0 * L + s * L + i;
                agg[s] += p.close(j) / p.close(j - 1) - 1.0;
            }
        double mean = 0.0;
        for (double v : agg) mean += v;
        mean /= m0;
        double ss = 0.0;
        for (double v : agg) ss += (v - mean) * (v - mean);
        est.b_hat[k] = 1.0 + mean;
        est.sigma2_hat[k] = ss / (m0 - 1);
    }
    if (est.sigma2_hat[0] > 0.0 && est.sigma2_hat[1] > 0.0) {
        const double g0 = est.b_hat[0] - r_L;
        const double g1 = est.b_hat[1] - r_L;
        est.beta_hat = g0 * g0 / est.sigma2_hat[0] + g1 * g1 / est.sigma2_hat[1];
    } else {
        est.degenerate = true;
        est.beta_hat = 0.0;
    }
    return est;
}

double fee_loan_step(double omega1, double omega2, double residual, double gross_a, double gross_b,
                     double r_L, double loan_L, double fee) {
    return omega1 * gross_a + omega2 * gross_b + std::max(residual, 0.0) * r_L +
           std::min(residual, 0.0) * loan_L - (std::abs(omega1) + std::abs(omega2)) * fee;
}

namespace {

WealthPath riskfree_path(const BacktestConfig& config, int tau, double beta_hat) {
    WealthPath path;
    path.degenerate_fallback = true;
    path.beta_hat = beta_hat;
    path.values.resize(tau + 1);
    path.values[0] = config.x;
    for (int s = 1; s <= tau; ++s) path.values[s] = path.values[s - 1] * config.r_L();
    return path;
}

WealthPath run_estimated(const PriceSeries& a, const PriceSeries& b, const BacktestConfig& config,
                         int t, int tau, bool with_costs) {
    config.check();
    require_day_index(a, t + tau * config.L, "strategy execution");
    require_day_index(b, t + tau * config.L, "strategy execution");
    const EstimatedParams est = estimate_params(a, b, t, config.L, config.m0, config.r);
    if (est.degenerate || est.beta_hat < config.degenerate_beta)
        return riskfree_path(config, tau, est.beta_hat);

    const double r_L = config.r_L();
    const double g = config.target(tau);
    const double riskfree_terminal = config.x * std::pow(r_L, tau);
    if (!(g > riskfree_terminal))
        throw InfeasibleTargetError("target g = " + std::to_string(g) +
                                        " does not exceed the risk-free terminal wealth " +
                                        std::to_string(riskfree_terminal),
                                    riskfree_terminal);
    const double mu_hat = tau * est.beta_hat / (2.0 * (g - riskfree_terminal));

    WealthPath path;
    path.beta_hat = est.beta_hat;
    path.values.resize(tau + 1);
    path.values[0] = config.x;
    for (int s = 1; s <= tau; ++s) {
        const double scale = std::pow(r_L, s - tau) / (2.0 * mu_hat);
        const double omega1 = scale * (est.b_hat[0] - r_L) / est.sigma2_hat[0];
        const double omega2 = scale * (est.b_hat[1] - r_L) / est.sigma2_hat[1];
        const double gross_a = a.close(t + s * config.L) / a.close(t + (s - 1) * config.L);
        const double gross_b = b.close(t + s * config.L) / b.close(t + (s - 1) * config.L);
        const double residual = path.values[s - 1] - omega1 - omega2;
        path.values[s] = with_costs
                             ? fee_loan_step(omega1, omega2, residual, gross_a, gross_b, r_L,
                                             config.loan_L(), config.fee)
                             : omega1 * gross_a + omega2 * gross_b + residual * r_L;
    }
    return path;
}

}  // namespace

WealthPath run_strategy_I(const PriceSeries& a, const PriceSeries& b, const BacktestConfig& config,
                          int t) {
    return run_estimated(a, b, config, t, config.tau > 0 ? config.tau : config.tau_default(),
                         false);
}

WealthPath run_strategy_II(const PriceSeries& a, const PriceSeries& b,
                           const BacktestConfig& config, int t) {
    return run_estimated(a, b, config, t, config.tau_star(), false);
}

WealthPath run_strategy_III(const PriceSeries& a, const PriceSeries& b,
                            const BacktestConfig& config, int t) {
    config.check();
    const int tau = config.tau > 0 ? config.tau : config.tau_default();
    require_day_index(a, t + tau * config.L, "strategy execution");
    require_day_index(b, t + tau * config.L, "strategy execution");
    WealthPath path;
    path.values.resize(tau + 1);
    path.values[0] = config.x;
    for (int s = 1; s <= tau; ++s) {
        const double gross_a = a.close(t + s * config.L) / a.close(t + (s - 1) * config.L);
        const double gross_b = b.close(t + s * config.L) / b.close(t + (s - 1) * config.L);
        path.values[s] = 0.5 * path.values[s - 1] * (gross_a + gross_b);
    }
    return path;
}

WealthPath run_strategy_I_with_costs(const PriceSeries& a, const PriceSeries& b,
                                     const BacktestConfig& config, int t) {
    return run_estimated(a, b, config, t, config.tau > 0 ? config.tau : config.tau_default(),
                         true);
}

AggregateMetrics aggregate_metrics(const std::vector<double>& terminal_wealths, int tau, int L,
                                   double rf_daily) {
    const int K = static_cast<int>(terminal_wealths.size());
    if (K < 2) throw std::domain_error("aggregate metrics need K >= 2 repetitions");
    if (tau < 1 || L < 1) throw std::domain_error("tau and L must be >= 1");
    double sum = 0.0;
    for (double v : terminal_wealths) sum += v;
    const double mean = sum / K;
    double ss = 0.0;
    for (double v : terminal_wealths) ss += (v - mean) * (v - mean);

    AggregateMetrics m;
    const double horizon_days = static_cast<double>(tau) * L * K;
    m.yearly_return = 250.0 / horizon_days * (sum - K);
    if (ss > 0.0)
        m.sharpe = std::sqrt(250.0 / horizon_days) * (sum - K - rf_daily * horizon_days) /
                   std::sqrt(ss);
    return m;
}

TheoryMetrics theory_metrics(const BacktestConfig& config, const std::vector<double>& beta_hats) {
    config.check();
    if (beta_hats.empty()) throw std::domain_error("theory metrics need at least one beta_hat");
    const int tau = config.tau_effective();
    const double g = config.target(tau);
    const double K = static_cast<double>(beta_hats.size());
    const double theta_pow = std::pow(config.theta_L(), tau);

    double denom = 0.0;
    for (double bh : beta_hats) {
        if (!(bh > 0.0)) throw std::domain_error("theory metrics need beta_hat > 0 for every window");
        denom += config.alpha * config.x * theta_pow / std::sqrt(tau * bh);
    }
    TheoryMetrics out;
    out.expected_yearly_return = 250.0 / (config.L * static_cast<double>(tau)) * (g - config.x);
    out.expected_sharpe = std::sqrt(250.0 / (config.L * static_cast<double>(tau))) * K *
                          (g - config.x - config.rf_daily * tau * config.L) / denom;
    return out;
}

std::string BacktestReport::flags() const {
    std::string f;
    if (degenerate_count > 0) f = "degenerate=" + std::to_string(degenerate_count);
    if (!metrics.sharpe) f += (f.empty() ? "" : ";") + std::string("zero_dispersion");
    return f;
}

BacktestReport run_backtest(const PriceSeries& a, const PriceSeries& b,
                            const BacktestConfig& config) {
    config.check();
    if (a.size() != b.size())
        throw DataError("price series lengths differ (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
    const int tau = config.tau_effective();
    const int w = config.window();
    const long needed = static_cast<long>(w) + config.K - 1 + static_cast<long>(tau) * config.L;
    if (needed > a.size())
        throw DataError("insufficient data: need w + K - 1 + tau L = " + std::to_string(needed) +
                        " rows, have " + std::to_string(a.size()));

    BacktestReport report;
    report.config = config;
    report.tau = tau;
    report.terminal_wealths.reserve(config.K);
    report.beta_hats.reserve(config.K);
    for (int i = 0; i < config.K; ++i) {
        const int t = w - 1 + i;  // 0-based day index of the estimation date
        WealthPath path;
        switch (config.strategy) {
            case BacktestStrategy::I: path = run_strategy_I(a, b, config, t); break;
            case BacktestStrategy::II: path = run_strategy_II(a, b, config, t); break;
            case BacktestStrategy::III: path = run_strategy_III(a, b, config, t); break;
            case BacktestStrategy::I_costs:
                path = run_strategy_I_with_costs(a, b, config, t);
                break;
        }
        report.terminal_wealths.push_back(path.values.back());
        report.beta_hats.push_back(path.beta_hat);
        if (path.degenerate_fallback) ++report.degenerate_count;
    }
    report.metrics = aggregate_metrics(report.terminal_wealths, tau, config.L, config.rf_daily);
    return report;
}

std::vector<SweepRow> sweep_over_L(const PriceSeries& a, const PriceSeries& b,
                                   const BacktestConfig& base, const std::vector<int>& L_values) {
    std::vector<SweepRow> rows;
    const BacktestStrategy first =
        base.fee > 0.0 ? BacktestStrategy::I_costs : BacktestStrategy::I;
    for (int L : L_values) {
        for (BacktestStrategy strat : {first, BacktestStrategy::II, BacktestStrategy::III}) {
            SweepRow row;
            row.L = L;
            row.strategy = strat;
            try {
                BacktestConfig cfg = base;
                cfg.L = L;
                cfg.tau = 0;  // ceil(250/L)
                cfg.strategy = strat;
                row.tau = cfg.tau_effective();
                const BacktestReport rep = run_backtest(a, b, cfg);
                row.metrics = rep.metrics;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace mpmv
