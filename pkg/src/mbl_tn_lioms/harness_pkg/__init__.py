"""Experiment configuration, realization fan-out, aggregation and output files."""

from .config import load_config_file, resolve_config
from .dispatcher import (
    run_realizations,
    aggregate_realizations,
    run_merit_experiment,
    run_entropy_experiment,
    run_oracle_compare,
)
from .structs import (
    ExperimentMode,
    ExperimentConfig,
    MeritMethod,
    MeritRow,
    EntropyRow,
    OracleRow,
    RealizationFailure,
    AggregateStats,
    ExperimentResult,
)

__all__ = [
    "load_config_file",
    "resolve_config",
    "run_realizations",
    "aggregate_realizations",
    "run_merit_experiment",
    "run_entropy_experiment",
    "run_oracle_compare",
    "ExperimentMode",
    "ExperimentConfig",
    "MeritMethod",
    "MeritRow",
    "EntropyRow",
    "OracleRow",
    "RealizationFailure",
    "AggregateStats",
    "ExperimentResult",
]
