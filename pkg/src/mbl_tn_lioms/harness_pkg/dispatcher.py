"""Fan-out of (W, realization) tasks, aggregation and output."""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import pandas as pd

from ..errors import ArgumentError
from .structs import (
    AggregateStats,
    ExperimentConfig,
    ExperimentMode,
    ExperimentResult,
    ExperimentRow,
    RealizationFailure,
)
from .tasks import run_realization
from .writers import write_outputs

logger = logging.getLogger(__name__)


async def run_realizations(cfg: ExperimentConfig) -> tuple[list[ExperimentRow], list[RealizationFailure]]:
    """Run every (W, realization) task of an experiment.

    Results come back in submission order (W in config order, then realization), so
    the merged rows do not depend on which worker finished first. With one worker the
    tasks run inline in this process.

    Returns:
        (rows, failures)
    """
    jobs = [(w, r) for w in cfg.disorder_list for r in range(cfg.realizations)]
    logger.info(
        "Running %s: %d disorder strengths x %d realizations on %d worker(s)",
        cfg.mode.value,
        len(cfg.disorder_list),
        cfg.realizations,
        cfg.workers,
    )
    if cfg.workers == 1:
        results = [run_realization(cfg, w, r) for w, r in jobs]
    else:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = await asyncio.gather(
                *[loop.run_in_executor(pool, run_realization, cfg, w, r) for w, r in jobs],
                return_exceptions=False,
            )

    # Separate successful results from errors
    rows = []
    failures = []
    for result in results:
        if isinstance(result, RealizationFailure):
            failures.append(result)
        else:
            rows.extend(result)
    return rows, failures


def aggregate_realizations(rows: Sequence[ExperimentRow]) -> list[AggregateStats]:
    """Mean and standard error of every value column per aggregation cell.

    Rows are put into canonical order (cell, then realization) before averaging, so
    shuffled input gives identical output. The standard error uses the sample standard
    deviation and is 0 for a single row.

    Raises:
        ArgumentError: If `rows` is empty or mixes row types
    """
    if not rows:
        raise ArgumentError("Cannot aggregate an empty set of rows")
    row_type = type(rows[0])
    if any(type(row) is not row_type for row in rows):
        raise ArgumentError("Cannot aggregate rows of different experiments together")

    keys = list(row_type.KEY_COLUMNS)
    values = list(row_type.VALUE_COLUMNS)
    frame = pd.DataFrame([row.model_dump(mode="json") for row in rows])
    frame = frame.sort_values(keys + ["realization"], kind="mergesort", ignore_index=True)
    grouped = frame.groupby(keys, sort=True)
    means = grouped[values].mean()
    sems = grouped[values].sem(ddof=1).fillna(0.0)
    counts = grouped.size()

    stats = []
    for cell_key, mean_row in means.iterrows():
        cell_values = cell_key if isinstance(cell_key, tuple) else (cell_key,)
        stats.append(
            AggregateStats(
                cell={k: _plain(v) for k, v in zip(keys, cell_values)},
                mean={c: float(mean_row[c]) for c in values},
                sem={c: float(sems.loc[cell_key, c]) for c in values},
                count=int(counts.loc[cell_key]),
            )
        )
    return stats


def _plain(value):
    """numpy scalar -> Python scalar."""
    return value.item() if hasattr(value, "item") else value


async def _run_experiment(cfg: ExperimentConfig, modes: set[ExperimentMode]) -> ExperimentResult:
    if cfg.mode not in modes:
        raise ArgumentError(f"Mode '{cfg.mode.value}' cannot be run by this experiment")
    rows, failures = await run_realizations(cfg)
    if failures:
        logger.error("%d of %d tasks failed; no files written", len(failures), len(cfg.disorder_list) * cfg.realizations)
        return ExperimentResult(mode=cfg.mode, rows=rows, aggregates=[], failures=failures, written=[])
    aggregates = aggregate_realizations(rows)
    written = write_outputs(cfg, rows, aggregates)
    return ExperimentResult(mode=cfg.mode, rows=rows, aggregates=aggregates, failures=[], written=written)


async def run_merit_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Figure of merit of the central LIOM per W and realization (tensor network or exact)."""
    return await _run_experiment(cfg, {ExperimentMode.MeritTnm, ExperimentMode.MeritEdm})


async def run_entropy_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Entanglement growth after a Néel quench per W, realization and time."""
    return await _run_experiment(cfg, {ExperimentMode.Entangle})


async def run_oracle_compare(cfg: ExperimentConfig) -> ExperimentResult:
    """Two-block entropy against the exact half-chain entropy on the same realizations."""
    return await _run_experiment(cfg, {ExperimentMode.OracleCompare})
