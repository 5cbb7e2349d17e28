"""CSV, metadata and SVG output. Every file is a pure function of the configuration."""

import logging
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Sequence

import matplotlib
import pandas as pd
import yaml
from matplotlib.figure import Figure

from .structs import AggregateStats, ExperimentConfig, ExperimentMode, ExperimentRow

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
SVG_HASH_SALT = "mbl-tn-lioms"

FILE_STEMS = {
    ExperimentMode.MeritTnm: "merit",
    ExperimentMode.MeritEdm: "merit",
    ExperimentMode.Entangle: "entropy",
    ExperimentMode.OracleCompare: "oracle",
}

SITE_CHOICES = {
    ExperimentMode.MeritTnm: "window center n0 = b + 1 of window [2, 2b + 1] in a (2b + 2)-site chain",
    ExperimentMode.MeritEdm: "site (N + 1) // 2 of window [2, N + 1] in an (N + 2)-site chain",
    ExperimentMode.Entangle: "cut between sites b and b + 1 of a standalone 2b-site window",
    ExperimentMode.OracleCompare: "cut between sites b and b + 1 of a 2b-site chain",
}

try:
    PACKAGE_VERSION = version("mbl-tn-lioms")
except PackageNotFoundError:
    PACKAGE_VERSION = "unknown"


def raw_frame(rows: Sequence[ExperimentRow]) -> pd.DataFrame:
    """One line per row, sorted by cell and then realization."""
    row_type = type(rows[0])
    frame = pd.DataFrame([row.model_dump(mode="json") for row in rows], columns=list(row_type.model_fields))
    order = list(row_type.KEY_COLUMNS) + ["realization"]
    return frame.sort_values(order, kind="mergesort", ignore_index=True)


def aggregate_frame(stats: Sequence[AggregateStats], row_type: type) -> pd.DataFrame:
    """Aggregates with `<value>_mean` / `<value>_sem` column pairs and a count column `n`."""
    columns = list(row_type.KEY_COLUMNS)
    for value in row_type.VALUE_COLUMNS:
        columns += [f"{value}_mean", f"{value}_sem"]
    columns.append("n")
    records = []
    for cell in stats:
        record = dict(cell.cell)
        for value in row_type.VALUE_COLUMNS:
            record[f"{value}_mean"] = cell.mean[value]
            record[f"{value}_sem"] = cell.sem[value]
        record["n"] = cell.count
        records.append(record)
    return pd.DataFrame(records, columns=columns)


def write_csv(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def write_metadata(cfg: ExperimentConfig, columns: dict[str, list[str]], path: Path) -> None:
    """Resolved configuration and run description; worker count and output path are left out."""
    metadata = {
        "package_version": PACKAGE_VERSION,
        "config": cfg.model_dump(mode="json", exclude={"workers", "out"}),
        "reported_site": SITE_CHOICES[cfg.mode],
        "columns": columns,
    }
    path.write_text(yaml.safe_dump(metadata, sort_keys=True), encoding="utf-8")


def write_svg(cfg: ExperimentConfig, aggregate: pd.DataFrame, path: Path) -> None:
    """Static line chart of the aggregate means with standard-error bars."""
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.subplots()
    if cfg.mode in (ExperimentMode.MeritTnm, ExperimentMode.MeritEdm):
        ax.errorbar(
            aggregate["disorder_w"], aggregate["delta_total_mean"], yerr=aggregate["delta_total_sem"], marker="o"
        )
        if (aggregate["delta_total_mean"] > 0).all():
            ax.set_yscale("log")
        ax.set_xlabel("disorder strength W")
        ax.set_ylabel("figure of merit")
        ax.set_title(f"{cfg.mode.value}, size {cfg.size_param}")
    else:
        value = "entropy" if cfg.mode is ExperimentMode.Entangle else "deviation"
        for disorder_w, group in aggregate.groupby("disorder_w", sort=True):
            ax.errorbar(group["time"], group[f"{value}_mean"], yerr=group[f"{value}_sem"], label=f"W = {disorder_w:g}")
        ax.set_xscale("log")
        ax.set_xlabel("time (1/J)")
        ax.set_ylabel("entanglement entropy" if value == "entropy" else "|S_TN - S_exact|")
        ax.set_title(f"{cfg.mode.value}, b = {cfg.block_legs}")
        ax.legend()
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        fig.savefig(path, format="svg", metadata={"Date": None})


def write_outputs(
    cfg: ExperimentConfig, rows: Sequence[ExperimentRow], aggregates: Sequence[AggregateStats]
) -> list[Path]:
    """Write raw and aggregate CSVs, metadata.yaml and (optionally) an SVG chart.

    Returns:
        Paths of the files written
    """
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = FILE_STEMS[cfg.mode]
    raw = raw_frame(rows)
    aggregate = aggregate_frame(aggregates, type(rows[0]))

    raw_path = out / f"{stem}_raw.csv"
    aggregate_path = out / f"{stem}_aggregate.csv"
    metadata_path = out / "metadata.yaml"
    write_csv(raw, raw_path)
    write_csv(aggregate, aggregate_path)
    write_metadata(
        cfg,
        {raw_path.name: list(raw.columns), aggregate_path.name: list(aggregate.columns)},
        metadata_path,
    )
    written = [raw_path, aggregate_path, metadata_path]
    if cfg.svg:
        svg_path = out / f"{stem}.svg"
        write_svg(cfg, aggregate, svg_path)
        written.append(svg_path)
    for path in written:
        logger.info("Wrote %s", path)
    return written
