"""Multi-agent optimal-liquidation simulator.

C++ core exposed through pybind11: closed-form trajectory/shortfall
computations, the multi-agent market environment, reward shaping, and the
experiment runner behind the `liquidsim` CLI.
"""

from ._core import (
    AgentSpec,
    CsvArtifact,
    ExperimentConfig,
    MarketEnv,
    MarketParams,
    Observation,
    RewardScheme,
    RunResult,
    StepResult,
    TheoremReport,
    Theorem1Case,
    Theorem2Case,
    Trajectory,
    UtilityValue,
    derive_params,
    evaluate_trajectory,
    kappa_tilde,
    optimal_expected_shortfall,
    optimal_remaining_utility,
    optimal_trajectory,
    parse_config,
    run_command,
    serialize_config,
    shape_rewards,
    utility_reward,
    verify_theorems,
)

__all__ = [
    "AgentSpec",
    "CsvArtifact",
    "ExperimentConfig",
    "MarketEnv",
    "MarketParams",
    "Observation",
    "RewardScheme",
    "RunResult",
    "StepResult",
    "TheoremReport",
    "Theorem1Case",
    "Theorem2Case",
    "Trajectory",
    "UtilityValue",
    "derive_params",
    "evaluate_trajectory",
    "kappa_tilde",
    "optimal_expected_shortfall",
    "optimal_remaining_utility",
    "optimal_trajectory",
    "parse_config",
    "run_command",
    "serialize_config",
    "shape_rewards",
    "utility_reward",
    "verify_theorems",
]
