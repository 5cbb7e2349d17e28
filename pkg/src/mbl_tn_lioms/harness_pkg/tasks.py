"""Per-realization work units; module-level so a process pool can pickle them."""

import logging
from typing import Callable

from pydantic import ValidationError

from ..entanglement_pkg import tn_entropy_trace
from ..errors import LiomError
from ..exact_diag_pkg import exact_entropy_trace, exact_window_liom
from ..liom_metrics_pkg import MeritReport, merit_split, merit_split_window
from ..spin_model_pkg import SiteRange, sample_chain
from ..tensor_network_pkg import WindowLayout, tn_liom
from .structs import (
    EntropyRow,
    ExperimentConfig,
    ExperimentMode,
    ExperimentRow,
    MeritMethod,
    MeritRow,
    OracleRow,
    RealizationFailure,
)

logger = logging.getLogger(__name__)

RealizationTask = Callable[[ExperimentConfig, float, int], list[ExperimentRow]]


def merit_tnm_rows(cfg: ExperimentConfig, disorder_w: float, realization: int) -> list[MeritRow]:
    """Tensor-network LIOM at the center of a 2b-site window with one spectator site on each side."""
    b = cfg.block_legs
    spec = sample_chain(cfg.seed, realization, 2 * b + 2, disorder_w, cfg.coupling_j, cfg.anisotropy_delta)
    layout = WindowLayout.at(2, b)
    tau = tn_liom(spec, layout, layout.center_site, dense_limit=cfg.dense_limit)
    report = merit_split(tau, spec, layout, realization=realization)
    return [_merit_row(cfg, report)]


def merit_edm_rows(cfg: ExperimentConfig, disorder_w: float, realization: int) -> list[MeritRow]:
    """Exact LIOM of an isolated chain_sites-site chain, measured inside a chain two sites longer."""
    n = cfg.chain_sites
    spec = sample_chain(cfg.seed, realization, n + 2, disorder_w, cfg.coupling_j, cfg.anisotropy_delta)
    window = SiteRange(first=2, last=n + 1)
    site = window.first + (n + 1) // 2 - 1
    tau = exact_window_liom(spec, window, site, dense_limit=cfg.dense_limit)
    report = merit_split_window(tau, spec, window, site, size_param=n, realization=realization)
    return [_merit_row(cfg, report)]


def _merit_row(cfg: ExperimentConfig, report: MeritReport) -> MeritRow:
    return MeritRow(
        method=MeritMethod.Tnm if cfg.mode is ExperimentMode.MeritTnm else MeritMethod.Edm,
        size_param=report.size_param,
        disorder_w=report.disorder_w,
        realization=report.realization,
        site=report.site,
        delta_total=report.delta_total,
        delta_1=report.delta_interior,
        delta_2=report.delta_boundary,
        seed=cfg.seed,
    )


def entropy_rows(cfg: ExperimentConfig, disorder_w: float, realization: int) -> list[EntropyRow]:
    """Entropy growth of a standalone 2b-site window cut in half."""
    b = cfg.block_legs
    spec = sample_chain(cfg.seed, realization, 2 * b, disorder_w, cfg.coupling_j, cfg.anisotropy_delta)
    trace = tn_entropy_trace(
        spec,
        WindowLayout.at(1, b),
        cfg.time_grid(),
        initial_bits=cfg.initial_state,
        path=cfg.diag_path,
        dense_limit=cfg.dense_limit,
        bridge=cfg.bridge,
        seed=cfg.seed,
        realization=realization,
    )
    return [
        EntropyRow(
            block_legs=b,
            disorder_w=disorder_w,
            realization=realization,
            time=t,
            entropy=s,
            seed=cfg.seed,
        )
        for t, s in zip(trace.grid.points, trace.entropy)
    ]


def oracle_rows(cfg: ExperimentConfig, disorder_w: float, realization: int) -> list[OracleRow]:
    """Exact half-chain entropy next to the two-block approximation on the same realization."""
    n, b = cfg.chain_sites, cfg.block_legs
    spec = sample_chain(cfg.seed, realization, n, disorder_w, cfg.coupling_j, cfg.anisotropy_delta)
    grid = cfg.time_grid()
    exact = exact_entropy_trace(spec, b, grid.points, cfg.initial_state, cfg.dense_limit)
    approximate = tn_entropy_trace(
        spec,
        WindowLayout.at(1, b),
        grid,
        initial_bits=cfg.initial_state,
        path=cfg.diag_path,
        dense_limit=cfg.dense_limit,
        bridge=cfg.bridge,
        seed=cfg.seed,
        realization=realization,
    )
    return [
        OracleRow(
            chain_sites=n,
            block_legs=b,
            disorder_w=disorder_w,
            realization=realization,
            time=t,
            entropy_exact=s_exact,
            entropy_tn=s_tn,
            deviation=abs(s_tn - s_exact),
            seed=cfg.seed,
        )
        for t, s_exact, s_tn in zip(grid.points, exact, approximate.entropy)
    ]


TASKS: dict[ExperimentMode, RealizationTask] = {
    ExperimentMode.MeritTnm: merit_tnm_rows,
    ExperimentMode.MeritEdm: merit_edm_rows,
    ExperimentMode.Entangle: entropy_rows,
    ExperimentMode.OracleCompare: oracle_rows,
}


def run_realization(
    cfg: ExperimentConfig, disorder_w: float, realization: int
) -> list[ExperimentRow] | RealizationFailure:
    """Run the task of `cfg.mode` for one (W, realization) pair.

    Returns:
        The rows of this realization, or a RealizationFailure describing the error
    """
    try:
        return TASKS[cfg.mode](cfg, disorder_w, realization)
    except LiomError as e:
        category, message = e.category, str(e)
    except ValidationError as e:
        # categorized errors raised inside pydantic validators arrive wrapped
        category, message = "argument", str(e)
    except Exception as e:
        category, message = "internal", f"Unexpected error: {e}"
    logger.error("W=%s realization %d failed (%s): %s", disorder_w, realization, category, message)
    return RealizationFailure(disorder_w=disorder_w, realization=realization, category=category, message=message)
