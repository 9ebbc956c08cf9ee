"""Multi-period mean-variance portfolio toolkit.

Thin re-export of the compiled core: market schedules, closed-form optimal
strategies, frontier curves, optimal-horizon search, seeded Monte Carlo and
the rolling-window backtest pipeline.
"""

from ._core import (  # noqa: F401
    AggregateMetrics,
    AssumptionError,
    BacktestConfig,
    BacktestReport,
    BacktestStrategy,
    ComparisonReport,
    DataError,
    EstimatedParams,
    FrontierCurve,
    HorizonSpec,
    InfeasibleTargetError,
    MarketParams,
    OptimalTau,
    PriceSeries,
    SimResult,
    StrategyIIResult,
    StrategyKind,
    StrategySchedule,
    SweepRow,
    TheoryMetrics,
    ValidationFailure,
    ValidationReport,
    WealthPath,
    aggregate_metrics,
    bellman_strategy,
    beta_schedule,
    compare_fixed_mu,
    compare_fixed_target,
    efficient_frontier_variance,
    equal_weight_rule,
    estimate_params,
    fee_loan_step,
    frontier_recursion,
    horizon_objective,
    load_prices,
    make_series,
    mu_from_target,
    optimal_tau,
    precommitted_frontier,
    precommitted_strategy,
    r_prod,
    run_backtest,
    run_strategy_I,
    run_strategy_I_with_costs,
    run_strategy_II,
    run_strategy_III,
    simulate_terminal_wealth,
    simulate_wealth,
    strategy_II,
    sweep_over_L,
    synthetic_prices,
    target_mean,
    theory_metrics,
    validate,
    value_function,
    write_prices,
)

__version__ = "0.1.0"
