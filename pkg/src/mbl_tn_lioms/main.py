"""mbl-tn-lioms command line.

Runs the figure-of-merit, entanglement-growth and exact-oracle experiments over
disorder realizations and writes CSV (and optionally SVG) results.
"""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from mbl_tn_lioms.entanglement_pkg import DiagonalPath
from mbl_tn_lioms.errors import LiomError
from mbl_tn_lioms.harness_pkg import (
    ExperimentMode,
    ExperimentResult,
    resolve_config,
    run_entropy_experiment,
    run_merit_experiment,
    run_oracle_compare,
)

logger = logging.getLogger(__name__)

EXIT_CODES = {"argument": 2, "capacity": 3, "contract": 4}


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="Config file with key=value lines (or a .yaml mapping)")
    parser.add_argument("--disorder", dest="disorder_list", help="Comma-separated disorder strengths, e.g. 8,12,16,20")
    parser.add_argument("--realizations", type=int, help="Disorder realizations per disorder strength")
    parser.add_argument("--seed", type=int, help="64-bit experiment seed")
    parser.add_argument("--coupling-j", dest="coupling_j", type=float, help="Exchange coupling J (default: 1.0)")
    parser.add_argument("--delta", dest="anisotropy_delta", type=float, help="Anisotropy Δ (default: 1.0)")
    parser.add_argument("--out", type=Path, help="Output directory (default: results)")
    parser.add_argument("--workers", type=int, help="Worker processes (default: $MBL_TN_WORKERS or 1)")
    parser.add_argument(
        "--dense-limit", dest="dense_limit", type=int, help="Largest dense diagonalization in sites (default: 12)"
    )
    parser.add_argument("--svg", action="store_true", default=None, help="Also write an SVG chart")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
        help="Logging level (default: WARNING)",
    )


def _add_time_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t-min", dest="t_min", type=float, help="First time point (default: 0.1)")
    parser.add_argument("--t-max", dest="t_max", type=float, help="Last time point (default: 1e6)")
    parser.add_argument("--t-points", dest="t_points", type=int, help="Log-spaced time points (default: 48)")
    parser.add_argument(
        "--initial-state", dest="initial_state", help="Product state as a 0/1 string (default: Néel)"
    )
    parser.add_argument(
        "--diag-path",
        dest="diag_path",
        choices=[p.value for p in DiagonalPath],
        help="Evaluation of the diagonal Hamiltonian (default: auto)",
    )
    parser.add_argument(
        "--no-bridge",
        dest="bridge",
        action="store_false",
        default=None,
        help="Replace the bridge unitary by the identity",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbl-tn-lioms",
        description="Approximate LIOMs of disordered XXZ chains from a two-layer tensor network",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    merit = subparsers.add_parser("merit", help="Figure of merit of the central LIOM versus disorder")
    _add_common_arguments(merit)
    merit.add_argument(
        "--method", choices=["tnm", "edm"], default="tnm", help="Tensor network (tnm) or exact LIOM (edm)"
    )
    merit.add_argument("--block-legs", dest="block_legs", type=int, help="Legs per block unitary b (tnm)")
    merit.add_argument("--chain-sites", dest="chain_sites", type=int, help="Isolated chain length N (edm)")

    entangle = subparsers.add_parser("entangle", help="Entanglement growth after a Néel quench")
    _add_common_arguments(entangle)
    _add_time_arguments(entangle)
    entangle.add_argument("--block-legs", dest="block_legs", type=int, help="Legs per block unitary b")

    oracle = subparsers.add_parser("oracle", help="Two-block entropy against exact diagonalization")
    _add_common_arguments(oracle)
    _add_time_arguments(oracle)
    oracle.add_argument("--block-legs", dest="block_legs", type=int, help="Legs per block unitary b")
    oracle.add_argument("--chain-sites", dest="chain_sites", type=int, help="Chain length, equal to 2b")
    return parser


def _mode(args: argparse.Namespace) -> ExperimentMode:
    if args.command == "merit":
        return ExperimentMode.MeritTnm if args.method == "tnm" else ExperimentMode.MeritEdm
    if args.command == "entangle":
        return ExperimentMode.Entangle
    return ExperimentMode.OracleCompare


def _report_failures(result: ExperimentResult) -> int:
    for failure in result.failures:
        print(
            f"error[{failure.category}]: W={failure.disorder_w:g} realization {failure.realization}: {failure.message}",
            file=sys.stderr,
        )
    return EXIT_CODES.get(result.failures[0].category, 1)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    cli_values = {
        k: v for k, v in vars(args).items() if k not in {"command", "method", "config", "log_level"}
    }
    runners = {
        ExperimentMode.MeritTnm: run_merit_experiment,
        ExperimentMode.MeritEdm: run_merit_experiment,
        ExperimentMode.Entangle: run_entropy_experiment,
        ExperimentMode.OracleCompare: run_oracle_compare,
    }
    try:
        mode = _mode(args)
        cfg = resolve_config(mode, cli_values, args.config)
        result = asyncio.run(runners[mode](cfg))
    except LiomError as e:
        print(f"error[{e.category}]: {e}", file=sys.stderr)
        return EXIT_CODES.get(e.category, 1)
    except ValidationError as e:
        print(f"error[argument]: {e}", file=sys.stderr)
        return EXIT_CODES["argument"]

    if result.failures:
        return _report_failures(result)
    for path in result.written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
