#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpmv/backtest.hpp"
#include "mpmv/frontier.hpp"
#include "mpmv/horizon.hpp"
#include "mpmv/simulate.hpp"

namespace py = pybind11;
using namespace mpmv;

namespace {

SimResult simulate_py(const MarketParams& params, const StrategySchedule& strategy, double x,
                      int horizon, int n_paths, uint64_t seed, bool negate_noise) {
    SimConfig config;
    config.params = params;
    config.strategy = strategy;
    config.x = x;
    config.horizon = horizon;
    config.n_paths = n_paths;
    config.seed = seed;
    config.negate_noise = negate_noise;
    return simulate_wealth(config);
}

std::vector<double> simulate_terminal_py(const MarketParams& params,
                                         const StrategySchedule& strategy, double x, int horizon,
                                         int n_paths, uint64_t seed, bool negate_noise) {
    SimConfig config;
    config.params = params;
    config.strategy = strategy;
    config.x = x;
    config.horizon = horizon;
    config.n_paths = n_paths;
    config.seed = seed;
    config.negate_noise = negate_noise;
    return simulate_terminal_wealth(config);
}

PriceSeries series_from_arrays(const std::string& label, const std::vector<std::string>& dates,
                               const std::vector<double>& closes) {
    if (dates.size() != closes.size())
        throw DataError("dates and closes must have the same length");
    std::vector<PricePoint> points(dates.size());
    for (size_t i = 0; i < dates.size(); ++i) points[i] = {dates[i], closes[i]};
    return make_series(label, std::move(points));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-period mean-variance portfolio toolkit";

    py::register_exception<AssumptionError>(m, "AssumptionError", PyExc_ValueError);
    py::register_exception<InfeasibleTargetError>(m, "InfeasibleTargetError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    // market
    py::class_<MarketParams>(m, "MarketParams")
        .def_static("constant", &MarketParams::constant, py::arg("T"), py::arg("r"), py::arg("b"),
                    py::arg("sigma"), py::arg("delta") = 1e-10,
                    "Time-constant coefficients expanded over T periods.")
        .def_static("from_schedules", &MarketParams::from_schedules, py::arg("r"), py::arg("b"),
                    py::arg("sigma"), py::arg("delta") = 1e-10)
        .def("truncated", &MarketParams::truncated, py::arg("T"))
        .def("gamma", &MarketParams::gamma, py::arg("s"))
        .def_readonly("horizon_T", &MarketParams::horizon_T)
        .def_readonly("n_assets", &MarketParams::n_assets)
        .def_readonly("d_noise", &MarketParams::d_noise)
        .def_readonly("r", &MarketParams::r)
        .def_readonly("delta", &MarketParams::delta);

    py::class_<ValidationFailure>(m, "ValidationFailure")
        .def_readonly("period", &ValidationFailure::period)
        .def_readonly("message", &ValidationFailure::message)
        .def("__repr__", [](const ValidationFailure& f) { return f.message; });

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_property_readonly("passed", &ValidationReport::pass)
        .def_readonly("failures", &ValidationReport::failures)
        .def("__repr__", &ValidationReport::to_string);

    m.def("validate", py::overload_cast<const MarketParams&>(&validate), py::arg("params"),
          "Check the standing market assumptions period by period.");
    m.def("validate", py::overload_cast<const MarketParams&, double>(&validate), py::arg("params"),
          py::arg("delta"));
    m.def("beta_schedule", &beta_schedule, py::arg("params"),
          "Per-period squared market price of risk.");
    m.def("r_prod", &r_prod, py::arg("params"), py::arg("a"), py::arg("b"),
          "Product of r(s) over [a, b]; 1 when b < a.");

    // strategy
    py::enum_<StrategyKind>(m, "StrategyKind")
        .value("Bellman", StrategyKind::Bellman)
        .value("Precommitted", StrategyKind::Precommitted)
        .value("EqualWeight", StrategyKind::EqualWeight);

    py::class_<StrategySchedule>(m, "StrategySchedule")
        .def_readonly("kind", &StrategySchedule::kind)
        .def_readonly("mu", &StrategySchedule::mu)
        .def_readonly("start", &StrategySchedule::start)
        .def_readonly("n_assets", &StrategySchedule::n_assets)
        .def_readonly("lambda_", &StrategySchedule::lambda)
        .def_readonly("capitals", &StrategySchedule::capitals)
        .def("length", &StrategySchedule::length)
        .def("state_dependent", &StrategySchedule::state_dependent)
        .def("allocation", &StrategySchedule::allocation, py::arg("s"), py::arg("wealth"));

    m.def("bellman_strategy", &bellman_strategy, py::arg("params"), py::arg("mu"),
          py::arg("t") = 0, "State-independent optimal capital schedule on [t, T).");
    m.def(
        "value_function",
        [](const MarketParams& params, double mu, int t, double x, double y) {
            return value_function(params, mu, {t, x, y});
        },
        py::arg("params"), py::arg("mu"), py::arg("t"), py::arg("x"), py::arg("y"));
    m.def("mu_from_target", &mu_from_target, py::arg("params"), py::arg("t"), py::arg("x"),
          py::arg("L"), "Risk aversion that makes the terminal mean hit L.");
    m.def("precommitted_strategy", &precommitted_strategy, py::arg("params"), py::arg("mu"),
          py::arg("t"), py::arg("x"));
    m.def("equal_weight_rule", &equal_weight_rule, py::arg("n"));

    // frontier
    py::class_<FrontierCurve>(m, "FrontierCurve")
        .def_readonly("t", &FrontierCurve::t)
        .def_readonly("mu", &FrontierCurve::mu)
        .def_readonly("x", &FrontierCurve::x)
        .def_readonly("mean", &FrontierCurve::mean)
        .def_readonly("variance", &FrontierCurve::variance);

    m.def("frontier_recursion", &frontier_recursion, py::arg("params"), py::arg("mu"),
          py::arg("t"), py::arg("x"),
          "Mean/variance of the optimal wealth per period, recursion cross-checked against the "
          "closed forms.");
    m.def("efficient_frontier_variance", &efficient_frontier_variance, py::arg("params"),
          py::arg("t"), py::arg("s"), py::arg("x"), py::arg("target_mean"));
    m.def(
        "precommitted_frontier",
        [](const MarketParams& params, int t, double x, double target_mean) {
            const auto p = precommitted_frontier(params, t, x, target_mean);
            return py::make_tuple(p.variance, p.lambda);
        },
        py::arg("params"), py::arg("t"), py::arg("x"), py::arg("target_mean"),
        "Returns (variance, lambda).");

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("mean_bellman", &ComparisonReport::mean_bellman)
        .def_readonly("var_bellman", &ComparisonReport::var_bellman)
        .def_readonly("mean_pre", &ComparisonReport::mean_pre)
        .def_readonly("var_pre", &ComparisonReport::var_pre)
        .def_readonly("mean_gap", &ComparisonReport::mean_gap)
        .def_readonly("var_gap", &ComparisonReport::var_gap);

    m.def(
        "compare_fixed_target",
        [](const MarketParams& params, int t, double x, double L) {
            return compare_strategies(params, t, x, FixedTarget{L});
        },
        py::arg("params"), py::arg("t"), py::arg("x"), py::arg("L"));
    m.def(
        "compare_fixed_mu",
        [](const MarketParams& params, int t, double x, double mu) {
            return compare_strategies(params, t, x, FixedMu{mu});
        },
        py::arg("params"), py::arg("t"), py::arg("x"), py::arg("mu"));

    // horizon
    py::class_<HorizonSpec>(m, "HorizonSpec")
        .def_static("constant", &HorizonSpec::constant, py::arg("alpha"), py::arg("theta"),
                    py::arg("tau_max") = 10000, py::arg("x") = 1.0)
        .def_static("scheduled", &HorizonSpec::scheduled, py::arg("alpha"), py::arg("theta"),
                    py::arg("tau_max") = 10000, py::arg("x") = 1.0)
        .def_readonly("alpha", &HorizonSpec::alpha)
        .def_readonly("theta", &HorizonSpec::theta)
        .def_readonly("tau_max", &HorizonSpec::tau_max)
        .def_readonly("x", &HorizonSpec::x);

    py::class_<OptimalTau>(m, "OptimalTau")
        .def_readonly("tau_star", &OptimalTau::tau_star)
        .def_readonly("objective", &OptimalTau::objective)
        .def_readonly("truncated", &OptimalTau::truncated)
        .def_readonly("objectives", &OptimalTau::objectives);

    py::class_<StrategyIIResult>(m, "StrategyIIResult")
        .def_readonly("schedule", &StrategyIIResult::schedule)
        .def_readonly("tau_star", &StrategyIIResult::tau_star)
        .def_readonly("mu", &StrategyIIResult::mu)
        .def_readonly("target", &StrategyIIResult::target)
        .def_readonly("truncated", &StrategyIIResult::truncated);

    m.def("target_mean", &target_mean, py::arg("spec"), py::arg("params"), py::arg("tau"),
          "Moving mean target g(tau).");
    m.def("horizon_objective", &horizon_objective, py::arg("spec"), py::arg("params"),
          py::arg("tau"));
    m.def("optimal_tau", &optimal_tau, py::arg("spec"), py::arg("params"));
    m.def("strategy_II", &strategy_II, py::arg("spec"), py::arg("params"));

    // simulate
    py::class_<SimResult>(m, "SimResult")
        .def_readonly("sample_mean", &SimResult::sample_mean)
        .def_readonly("sample_variance", &SimResult::sample_variance)
        .def_readonly("std_error", &SimResult::std_error)
        .def_readonly("n_paths", &SimResult::n_paths)
        .def_readonly("seed", &SimResult::seed);

    m.def("simulate_wealth", &simulate_py, py::arg("params"), py::arg("strategy"), py::arg("x"),
          py::arg("horizon"), py::arg("n_paths"), py::arg("seed"),
          py::arg("negate_noise") = false,
          "Seeded Monte Carlo of the wealth dynamics; sample variance uses divisor M.");
    m.def("simulate_terminal_wealth", &simulate_terminal_py, py::arg("params"),
          py::arg("strategy"), py::arg("x"), py::arg("horizon"), py::arg("n_paths"),
          py::arg("seed"), py::arg("negate_noise") = false);

    // backtest
    py::class_<PriceSeries>(m, "PriceSeries")
        .def_readonly("label", &PriceSeries::label)
        .def("size", &PriceSeries::size)
        .def("close", &PriceSeries::close, py::arg("i"))
        .def_property_readonly("dates",
                               [](const PriceSeries& s) {
                                   std::vector<std::string> out;
                                   out.reserve(s.points.size());
                                   for (const auto& p : s.points) out.push_back(p.date);
                                   return out;
                               })
        .def_property_readonly("closes", [](const PriceSeries& s) {
            std::vector<double> out;
            out.reserve(s.points.size());
            for (const auto& p : s.points) out.push_back(p.close);
            return out;
        });

    m.def("make_series", &series_from_arrays, py::arg("label"), py::arg("dates"),
          py::arg("closes"));
    m.def("load_prices", &load_prices, py::arg("path"));
    m.def("write_prices", &write_prices, py::arg("series"), py::arg("path"));
    m.def("synthetic_prices", &synthetic_prices, py::arg("label"), py::arg("b"), py::arg("sigma"),
          py::arg("days"), py::arg("p0"), py::arg("seed"), py::arg("asset_tag") = 0);

    py::enum_<BacktestStrategy>(m, "BacktestStrategy")
        .value("I", BacktestStrategy::I)
        .value("II", BacktestStrategy::II)
        .value("III", BacktestStrategy::III)
        .value("I_costs", BacktestStrategy::I_costs);

    py::class_<BacktestConfig>(m, "BacktestConfig")
        .def(py::init<>())
        .def_readwrite("L", &BacktestConfig::L)
        .def_readwrite("m0", &BacktestConfig::m0)
        .def_readwrite("tau", &BacktestConfig::tau)
        .def_readwrite("K", &BacktestConfig::K)
        .def_readwrite("r", &BacktestConfig::r)
        .def_readwrite("theta", &BacktestConfig::theta)
        .def_readwrite("alpha", &BacktestConfig::alpha)
        .def_readwrite("x", &BacktestConfig::x)
        .def_readwrite("strategy", &BacktestConfig::strategy)
        .def_readwrite("fee", &BacktestConfig::fee)
        .def_readwrite("loan", &BacktestConfig::loan)
        .def_readwrite("rf_daily", &BacktestConfig::rf_daily)
        .def("window", &BacktestConfig::window)
        .def("r_L", &BacktestConfig::r_L)
        .def("theta_L", &BacktestConfig::theta_L)
        .def("tau_star", &BacktestConfig::tau_star)
        .def("tau_effective", &BacktestConfig::tau_effective)
        .def("target", &BacktestConfig::target, py::arg("tau"));

    py::class_<EstimatedParams>(m, "EstimatedParams")
        .def_property_readonly("b_hat",
                               [](const EstimatedParams& e) {
                                   return py::make_tuple(e.b_hat[0], e.b_hat[1]);
                               })
        .def_property_readonly("sigma2_hat",
                               [](const EstimatedParams& e) {
                                   return py::make_tuple(e.sigma2_hat[0], e.sigma2_hat[1]);
                               })
        .def_readonly("beta_hat", &EstimatedParams::beta_hat)
        .def_readonly("degenerate", &EstimatedParams::degenerate);

    m.def("estimate_params", &estimate_params, py::arg("a"), py::arg("b"), py::arg("t"),
          py::arg("L"), py::arg("m0"), py::arg("r_daily"),
          "Rolling-window estimates of L-day gross return moments at day t.");

    py::class_<WealthPath>(m, "WealthPath")
        .def_readonly("values", &WealthPath::values)
        .def_readonly("degenerate_fallback", &WealthPath::degenerate_fallback)
        .def_readonly("beta_hat", &WealthPath::beta_hat);

    m.def("run_strategy_I", &run_strategy_I, py::arg("a"), py::arg("b"), py::arg("config"),
          py::arg("t"));
    m.def("run_strategy_II", &run_strategy_II, py::arg("a"), py::arg("b"), py::arg("config"),
          py::arg("t"));
    m.def("run_strategy_III", &run_strategy_III, py::arg("a"), py::arg("b"), py::arg("config"),
          py::arg("t"));
    m.def("run_strategy_I_with_costs", &run_strategy_I_with_costs, py::arg("a"), py::arg("b"),
          py::arg("config"), py::arg("t"));
    m.def("fee_loan_step", &fee_loan_step, py::arg("omega1"), py::arg("omega2"),
          py::arg("residual"), py::arg("gross_a"), py::arg("gross_b"), py::arg("r_L"),
          py::arg("loan_L"), py::arg("fee"));

    py::class_<AggregateMetrics>(m, "AggregateMetrics")
        .def_readonly("yearly_return", &AggregateMetrics::yearly_return)
        .def_readonly("sharpe", &AggregateMetrics::sharpe);

    m.def("aggregate_metrics", &aggregate_metrics, py::arg("terminal_wealths"), py::arg("tau"),
          py::arg("L"), py::arg("rf_daily") = 0.0002);

    py::class_<TheoryMetrics>(m, "TheoryMetrics")
        .def_readonly("expected_yearly_return", &TheoryMetrics::expected_yearly_return)
        .def_readonly("expected_sharpe", &TheoryMetrics::expected_sharpe);

    m.def("theory_metrics", &theory_metrics, py::arg("config"), py::arg("beta_hats"));

    py::class_<BacktestReport>(m, "BacktestReport")
        .def_readonly("tau", &BacktestReport::tau)
        .def_readonly("terminal_wealths", &BacktestReport::terminal_wealths)
        .def_readonly("beta_hats", &BacktestReport::beta_hats)
        .def_readonly("degenerate_count", &BacktestReport::degenerate_count)
        .def_readonly("metrics", &BacktestReport::metrics)
        .def("flags", &BacktestReport::flags);

    m.def("run_backtest", &run_backtest, py::arg("a"), py::arg("b"), py::arg("config"),
          "Full rolling-window pipeline: K repetitions plus aggregate metrics.");

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("L", &SweepRow::L)
        .def_readonly("strategy", &SweepRow::strategy)
        .def_readonly("tau", &SweepRow::tau)
        .def_readonly("metrics", &SweepRow::metrics)
        .def_readonly("error", &SweepRow::error);

    m.def("sweep_over_L", &sweep_over_L, py::arg("a"), py::arg("b"), py::arg("base"),
          py::arg("L_values"));
}
