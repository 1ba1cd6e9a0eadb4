from ._core import (
    CellResult,
    ConfigError,
    DataError,
    ExperimentResult,
    IoError,
    Policy,
    Scenario,
    backtest,
    empirical_mv,
    expected_pull_bound,
    expected_regret_bound,
    high_prob_regret_bound,
    max_drawdown,
    mean_conc_bound,
    mean_variance,
    mv_conc_bound,
    optimal_arm,
    phi,
    phi_inverse,
    preset_names,
    regret,
    rho_from_tilde,
    run_config,
    run_episode,
    run_preset,
    var_conc_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
