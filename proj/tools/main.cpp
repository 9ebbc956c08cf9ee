// mpmv command line tool: frontier curves, horizon search, Monte Carlo
// tables and rolling-window backtests, all emitting plot-ready CSV.
//
// Exit codes: 0 success, 2 config/validation error, 3 data error,
// 4 infeasible target.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "market_json.hpp"
#include "mpmv/backtest.hpp"
#include "mpmv/frontier.hpp"
#include "mpmv/horizon.hpp"
#include "mpmv/simulate.hpp"

using namespace mpmv;
using nlohmann::json;

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write output file '" + path + "'");
    return out;
}

void require_valid(const MarketParams& params) {
    const auto report = validate(params);
    if (!report.pass()) throw AssumptionError(report.to_string());
}

struct FrontierArgs {
    std::string market, out;
    int t = 0;
    int tau = 0;  // 0: use the market horizon
    double x = 1.0;
    std::optional<double> mu, target;
    std::optional<double> r_override, delta_override;
};

struct TauArgs {
    std::string market, out, config;
    std::optional<double> alpha, theta, x;
    std::optional<int> tau_max;
    std::optional<double> r_override;
};

struct SimArgs {
    std::string config, out;
    std::optional<int> M;
    std::optional<uint64_t> seed;
    std::optional<double> x;
};

struct BacktestArgs {
    std::string config_file;
    std::string prices_a, prices_b, out, wealth_out;
    std::string strategy = "I";
    BacktestConfig config;
};

struct SweepArgs {
    std::string config_file;
    std::string prices_a, prices_b, out;
    int L_min = 1, L_max = 60;
    BacktestConfig config;
};

// Merge order: defaults, then the config file, then any flag given on the
// command line (flags win). `parsed` reports whether a flag was supplied.
void merge_backtest_json(const std::string& path, BacktestConfig& config, std::string& prices_a,
                         std::string& prices_b, std::string* strategy,
                         const std::function<bool(const std::string&)>& parsed) {
    if (path.empty()) return;
    const json cfg = cli::load_json_file(path);
    auto take_int = [&](const char* key, const char* flag, int& target) {
        if (cfg.contains(key) && !parsed(flag)) target = cfg.at(key).get<int>();
    };
    auto take_double = [&](const char* key, const char* flag, double& target) {
        if (cfg.contains(key) && !parsed(flag)) target = cfg.at(key).get<double>();
    };
    take_int("L", "--L", config.L);
    take_int("tau", "--tau", config.tau);
    take_int("m0", "--m0", config.m0);
    take_int("K", "--K", config.K);
    take_double("r", "--r", config.r);
    take_double("theta", "--theta", config.theta);
    take_double("alpha", "--alpha", config.alpha);
    take_double("x", "--x", config.x);
    take_double("fee", "--fee", config.fee);
    take_double("loan", "--loan", config.loan);
    take_double("rf_daily", "--rf-daily", config.rf_daily);
    if (cfg.contains("prices_a") && !parsed("--prices-a"))
        prices_a = cfg.at("prices_a").get<std::string>();
    if (cfg.contains("prices_b") && !parsed("--prices-b"))
        prices_b = cfg.at("prices_b").get<std::string>();
    if (strategy && cfg.contains("strategy") && !parsed("--strategy"))
        *strategy = cfg.at("strategy").get<std::string>();
}

void apply_overrides(MarketParams& params, const std::optional<double>& r,
                     const std::optional<double>& delta) {
    if (r) std::fill(params.r.begin(), params.r.end(), *r);
    if (delta) params.delta = *delta;
}

BacktestStrategy parse_strategy(const std::string& name) {
    if (name == "I") return BacktestStrategy::I;
    if (name == "II") return BacktestStrategy::II;
    if (name == "III") return BacktestStrategy::III;
    if (name == "I_costs") return BacktestStrategy::I_costs;
    throw std::invalid_argument("unknown strategy '" + name + "' (use I, II, III or I_costs)");
}

int cmd_frontier(const FrontierArgs& args) {
    MarketParams params = cli::load_market(args.market);
    apply_overrides(params, args.r_override, args.delta_override);
    require_valid(params);
    if (args.mu.has_value() == args.target.has_value())
        throw std::invalid_argument("give exactly one of --mu and --target");
    if (args.tau > 0) params = params.truncated(args.t + args.tau);

    const double mu = args.mu ? *args.mu : mu_from_target(params, args.t, args.x, *args.target);
    const auto curve = frontier_recursion(params, mu, args.t, args.x);

    auto out = open_out(args.out);
    out << "# command=frontier\n"
        << "# market=" << args.market << "\n"
        << "# t=" << args.t << "\n"
        << "# T=" << params.horizon_T << "\n"
        << "# x=" << fmt17(args.x) << "\n"
        << "# mu=" << fmt17(mu) << "\n";
    if (args.target) out << "# target=" << fmt17(*args.target) << "\n";
    curve.to_csv(out);

    std::cout << "frontier: periods " << args.t << ".." << params.horizon_T
              << "  mu=" << fmt6(mu) << "  terminal mean=" << fmt6(curve.mean.back())
              << "  variance=" << fmt6(curve.variance.back()) << "\n";
    return 0;
}

int cmd_tau(const TauArgs& args) {
    MarketParams params = cli::load_market(args.market);
    apply_overrides(params, args.r_override, std::nullopt);
    require_valid(params);

    json cfg = args.config.empty() ? json::object() : cli::load_json_file(args.config);
    const double alpha = args.alpha ? *args.alpha : cfg.value("alpha", 0.0);
    const double x = args.x ? *args.x : cfg.value("x", 1.0);
    const int tau_max = args.tau_max ? *args.tau_max : cfg.value("tau_max", 10000);
    if (!(alpha > 0.0))
        throw std::invalid_argument("alpha must be given (> 0) via --alpha or the config file");

    HorizonSpec spec;
    if (args.theta) {
        spec = HorizonSpec::constant(alpha, *args.theta, tau_max, x);
    } else if (cfg.contains("theta") && cfg.at("theta").is_array()) {
        std::vector<double> theta = cfg.at("theta").get<std::vector<double>>();
        spec = HorizonSpec::scheduled(alpha, std::move(theta), tau_max, x);
    } else if (cfg.contains("theta")) {
        spec = HorizonSpec::constant(alpha, cfg.at("theta").get<double>(), tau_max, x);
    } else {
        throw std::invalid_argument("theta must be given via --theta or the config file");
    }

    const auto opt = optimal_tau(spec, params);
    if (opt.truncated)
        std::cerr << "warning: search stopped at the cap with the objective still decreasing; "
                     "tau_star is best-so-far\n";

    {
        auto out = open_out(args.out);
        out << "# command=tau\n"
            << "# market=" << args.market << "\n"
            << "# alpha=" << fmt17(alpha) << "\n"
            << "# x=" << fmt17(x) << "\n"
            << "# tau_max=" << tau_max << "\n"
            << "# tau_star=" << opt.tau_star << "\n"
            << "# truncated=" << (opt.truncated ? 1 : 0) << "\n"
            << "tau,J\n";
        for (size_t k = 0; k < opt.objectives.size(); ++k)
            out << (k + 1) << ',' << fmt17(opt.objectives[k]) << '\n';
    }
    std::cout << "tau_star=" << opt.tau_star << "  objective=" << fmt6(opt.objective)
              << (opt.truncated ? "  (truncated)" : "") << "\n";
    return 0;
}

int cmd_simulate(const SimArgs& args) {
    const json cfg = cli::load_json_file(args.config);
    if (!cfg.contains("market")) throw DataError("simulation config misses the 'market' object");
    MarketParams params = cli::market_from_json(cfg.at("market"));
    require_valid(params);

    const double x = args.x ? *args.x : cfg.value("x", 1.0);
    const int M = args.M ? *args.M : cfg.value("M", 5000);
    const uint64_t seed = args.seed ? *args.seed : cfg.value("seed", uint64_t{1});
    const double alpha = cfg.value("alpha", 0.5);
    const double theta = cfg.value("theta", 1.008);
    if (!cfg.contains("runs") || !cfg.at("runs").is_array() || cfg.at("runs").empty())
        throw DataError("simulation config needs a non-empty 'runs' array");

    struct Row {
        std::string strategy;
        int horizon;
    };
    std::vector<Row> labels;
    std::vector<SimConfig> configs;
    size_t index = 0;
    for (const auto& run : cfg.at("runs")) {
        const std::string strat = run.value("strategy", "I");
        SimConfig sim;
        sim.x = x;
        sim.n_paths = run.value("M", M);
        sim.seed = run.value("seed", seed + index);
        int tau = run.value("tau", 0);
        if (strat == "II") {
            const auto spec = HorizonSpec::constant(alpha, theta, params.horizon_T, x);
            const auto result = strategy_II(spec, params);
            if (result.truncated)
                std::cerr << "warning: run " << index << ": horizon search truncated at the market"
                          << " length; tau_star is best-so-far\n";
            tau = result.tau_star;
            sim.params = params.truncated(tau);
            sim.strategy = result.schedule;
        } else if (strat == "I" || strat == "III") {
            if (tau < 1)
                throw DataError("run " + std::to_string(index) + ": strategy " + strat +
                                " needs a 'tau' >= 1");
            sim.params = params.truncated(tau);
            if (strat == "III") {
                sim.strategy = equal_weight_rule(params.n_assets);
            } else {
                double mu;
                if (run.contains("mu")) {
                    mu = run.at("mu").get<double>();
                } else {
                    const double target = run.contains("target")
                                              ? run.at("target").get<double>()
                                              : x * r_prod(sim.params, 0, tau - 1) +
                                                    alpha * x * std::pow(theta, tau);
                    mu = mu_from_target(sim.params, 0, x, target);
                }
                sim.strategy = bellman_strategy(sim.params, mu, 0);
            }
        } else {
            throw DataError("run " + std::to_string(index) + ": unknown strategy '" + strat + "'");
        }
        sim.horizon = tau;
        labels.push_back({strat, tau});
        configs.push_back(std::move(sim));
        ++index;
    }

    const auto rows = simulate_table(configs);
    for (size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].error.empty())
            throw DataError("run " + std::to_string(i) + " (strategy " + labels[i].strategy +
                            ", tau " + std::to_string(labels[i].horizon) + "): " + rows[i].error);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!args.out.empty()) {
        file = open_out(args.out);
        os = &file;
    }
    *os << "# command=simulate\n"
        << "# config=" << args.config << "\n"
        << "# x=" << fmt17(x) << "\n"
        << "# alpha=" << fmt17(alpha) << "\n"
        << "# theta=" << fmt17(theta) << "\n"
        << "strategy,horizon,R,V,stderr,M,seed\n";
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& res = *rows[i].result;
        if (res.n_paths == 1)
            std::cerr << "warning: run " << i << ": M=1 makes the variance estimate degenerate\n";
        *os << labels[i].strategy << ',' << labels[i].horizon << ',' << fmt17(res.sample_mean)
            << ',' << fmt17(res.sample_variance) << ',' << fmt17(res.std_error) << ','
            << res.n_paths << ',' << res.seed << '\n';
    }
    if (!args.out.empty()) {
        for (size_t i = 0; i < rows.size(); ++i) {
            const auto& res = *rows[i].result;
            std::cout << "strategy " << labels[i].strategy << " tau=" << labels[i].horizon
                      << ": R=" << fmt6(res.sample_mean) << " V=" << fmt6(res.sample_variance)
                      << " stderr=" << fmt6(res.std_error) << "\n";
        }
    }
    return 0;
}

void echo_backtest_header(std::ostream& os, const char* command, const std::string& a,
                          const std::string& b, const BacktestConfig& c) {
    os << "# command=" << command << "\n"
       << "# prices_a=" << a << "\n"
       << "# prices_b=" << b << "\n"
       << "# strategy=" << to_string(c.strategy) << "\n"
       << "# L=" << c.L << "\n"
       << "# tau=" << c.tau_effective() << "\n"
       << "# tau_star=" << c.tau_star() << "\n"
       << "# m0=" << c.m0 << "\n"
       << "# K=" << c.K << "\n"
       << "# r=" << fmt17(c.r) << "\n"
       << "# theta=" << fmt17(c.theta) << "\n"
       << "# alpha=" << fmt17(c.alpha) << "\n"
       << "# x=" << fmt17(c.x) << "\n"
       << "# fee=" << fmt17(c.fee) << "\n"
       << "# loan=" << fmt17(c.loan) << "\n"
       << "# rf_daily=" << fmt17(c.rf_daily) << "\n";
}

int cmd_backtest(const BacktestArgs& args) {
    BacktestConfig config = args.config;
    config.strategy = parse_strategy(args.strategy);
    config.check();
    if (args.prices_a.empty() || args.prices_b.empty())
        throw std::invalid_argument("both price series are needed (--prices-a/--prices-b or the config file)");
    const auto a = load_prices(args.prices_a);
    const auto b = load_prices(args.prices_b);
    const auto report = run_backtest(a, b, config);

    auto out = open_out(args.out);
    echo_backtest_header(out, "backtest", args.prices_a, args.prices_b, config);
    out << "strategy,L,tau,K,yearly_return,sharpe,flags\n"
        << to_string(config.strategy) << ',' << config.L << ',' << report.tau << ',' << config.K
        << ',' << fmt17(report.metrics.yearly_return) << ','
        << (report.metrics.sharpe ? fmt17(*report.metrics.sharpe) : "nan") << ','
        << report.flags() << '\n';

    if (!args.wealth_out.empty()) {
        auto wout = open_out(args.wealth_out);
        echo_backtest_header(wout, "backtest", args.prices_a, args.prices_b, config);
        wout << "repetition,terminal_wealth\n";
        for (size_t i = 0; i < report.terminal_wealths.size(); ++i)
            wout << (i + 1) << ',' << fmt17(report.terminal_wealths[i]) << '\n';
    }

    std::cout << "strategy " << to_string(config.strategy) << ": yearly_return="
              << fmt6(report.metrics.yearly_return) << " sharpe="
              << (report.metrics.sharpe ? fmt6(*report.metrics.sharpe) : "nan")
              << " (L=" << config.L << " tau=" << report.tau << " K=" << config.K
              << " degenerate=" << report.degenerate_count << ")\n";
    return 0;
}

int cmd_sweep(const SweepArgs& args) {
    BacktestConfig config = args.config;
    config.tau = 0;
    config.check();
    if (args.L_min < 1 || args.L_max < args.L_min)
        throw std::invalid_argument("need 1 <= L-min <= L-max");
    if (args.prices_a.empty() || args.prices_b.empty())
        throw std::invalid_argument("both price series are needed (--prices-a/--prices-b or the config file)");
    const auto a = load_prices(args.prices_a);
    const auto b = load_prices(args.prices_b);
    std::vector<int> L_values;
    for (int L = args.L_min; L <= args.L_max; ++L) L_values.push_back(L);

    const auto rows = sweep_over_L(a, b, config, L_values);
    auto out = open_out(args.out);
    echo_backtest_header(out, "sweep", args.prices_a, args.prices_b, config);
    out << "# L_min=" << args.L_min << "\n# L_max=" << args.L_max << "\n";
    out << "L,strategy,yearly_return,sharpe\n";
    int succeeded = 0;
    for (const auto& row : rows) {
        if (row.error.empty()) {
            ++succeeded;
            out << row.L << ',' << to_string(row.strategy) << ','
                << fmt17(row.metrics->yearly_return) << ','
                << (row.metrics->sharpe ? fmt17(*row.metrics->sharpe) : "nan") << '\n';
        } else {
            out << "# error L=" << row.L << " strategy=" << to_string(row.strategy) << ": "
                << row.error << '\n';
        }
    }
    std::cout << "sweep: " << succeeded << "/" << rows.size() << " rows\n";
    if (succeeded == 0) throw DataError("every sweep row failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-period mean-variance portfolio toolkit"};
    app.require_subcommand(1);

    FrontierArgs fr;
    auto* frontier = app.add_subcommand("frontier", "mean/variance of the optimal wealth per period");
    frontier->add_option("--market", fr.market, "market config JSON")->required();
    frontier->add_option("--t", fr.t, "start period");
    frontier->add_option("--tau", fr.tau, "periods from t (default: market horizon)");
    frontier->add_option("--x", fr.x, "initial wealth");
    frontier->add_option("--mu", fr.mu, "risk aversion");
    frontier->add_option("--target", fr.target, "terminal mean target (calibrates mu)");
    frontier->add_option("--r", fr.r_override, "override: constant risk-free gross return");
    frontier->add_option("--delta", fr.delta_override, "override: positive-definiteness margin");
    frontier->add_option("--out", fr.out, "output CSV")->required();

    TauArgs ta;
    auto* tau = app.add_subcommand("tau", "optimal investment period search");
    tau->add_option("--market", ta.market, "market config JSON")->required();
    tau->add_option("--config", ta.config, "horizon config JSON (alpha, theta, tau_max, x)");
    tau->add_option("--alpha", ta.alpha, "excess-return scale");
    tau->add_option("--theta", ta.theta, "constant excess growth factor");
    tau->add_option("--x", ta.x, "initial wealth");
    tau->add_option("--tau-max", ta.tau_max, "search cap");
    tau->add_option("--r", ta.r_override, "override: constant risk-free gross return");
    tau->add_option("--out", ta.out, "output CSV for the (tau, J) curve")->required();

    SimArgs si;
    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo runs of the wealth dynamics");
    simulate->add_option("--config", si.config, "simulation config JSON")->required();
    simulate->add_option("--M", si.M, "override: path count");
    simulate->add_option("--seed", si.seed, "override: base seed");
    simulate->add_option("--x", si.x, "override: initial wealth");
    simulate->add_option("--out", si.out, "output CSV (default: stdout)");

    BacktestArgs bt;
    auto* backtest = app.add_subcommand("backtest", "rolling-window pipeline on two price series");
    backtest->add_option("--config", bt.config_file, "config JSON; flags win over its entries");
    backtest->add_option("--prices-a", bt.prices_a, "price CSV, first asset");
    backtest->add_option("--prices-b", bt.prices_b, "price CSV, second asset");
    backtest->add_option("--strategy", bt.strategy, "I, II, III or I_costs");
    backtest->add_option("--L", bt.config.L, "single-period length in days");
    backtest->add_option("--tau", bt.config.tau, "investment period (default ceil(250/L))");
    backtest->add_option("--m0", bt.config.m0, "window multiplier (w = m0 L + 1)");
    backtest->add_option("--K", bt.config.K, "repetition count");
    backtest->add_option("--r", bt.config.r, "daily risk-free gross return");
    backtest->add_option("--theta", bt.config.theta, "daily excess factor");
    backtest->add_option("--alpha", bt.config.alpha, "excess-return scale");
    backtest->add_option("--x", bt.config.x, "initial wealth");
    backtest->add_option("--fee", bt.config.fee, "transaction fee rate");
    backtest->add_option("--loan", bt.config.loan, "daily loan gross rate");
    backtest->add_option("--rf-daily", bt.config.rf_daily, "daily excess rate in the Sharpe metric");
    backtest->add_option("--out", bt.out, "report CSV")->required();
    backtest->add_option("--wealth-out", bt.wealth_out, "per-repetition terminal wealth CSV");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "metrics of strategies I/II/III across L");
    sweep->add_option("--config", sw.config_file, "config JSON; flags win over its entries");
    sweep->add_option("--prices-a", sw.prices_a, "price CSV, first asset");
    sweep->add_option("--prices-b", sw.prices_b, "price CSV, second asset");
    sweep->add_option("--L-min", sw.L_min, "smallest L");
    sweep->add_option("--L-max", sw.L_max, "largest L");
    sweep->add_option("--m0", sw.config.m0, "window multiplier");
    sweep->add_option("--K", sw.config.K, "repetition count");
    sweep->add_option("--r", sw.config.r, "daily risk-free gross return");
    sweep->add_option("--theta", sw.config.theta, "daily excess factor");
    sweep->add_option("--alpha", sw.config.alpha, "excess-return scale");
    sweep->add_option("--x", sw.config.x, "initial wealth");
    sweep->add_option("--fee", sw.config.fee, "fee rate; > 0 runs strategy I with costs");
    sweep->add_option("--loan", sw.config.loan, "daily loan gross rate");
    sweep->add_option("--rf-daily", sw.config.rf_daily, "daily excess rate in the Sharpe metric");
    sweep->add_option("--out", sw.out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (frontier->parsed()) return cmd_frontier(fr);
        if (tau->parsed()) return cmd_tau(ta);
        if (simulate->parsed()) return cmd_simulate(si);
        if (backtest->parsed()) {
            merge_backtest_json(bt.config_file, bt.config, bt.prices_a, bt.prices_b, &bt.strategy,
                                [&](const std::string& f) { return backtest->count(f) > 0; });
            return cmd_backtest(bt);
        }
        if (sweep->parsed()) {
            merge_backtest_json(sw.config_file, sw.config, sw.prices_a, sw.prices_b, nullptr,
                                [&](const std::string& f) { return sweep->count(f) > 0; });
            return cmd_sweep(sw);
        }
    } catch (const InfeasibleTargetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const AssumptionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
