import math
import random
from pathlib import Path

import pytest

from mbl_tn_lioms.errors import ArgumentError
from mbl_tn_lioms.harness_pkg import (
    EntropyRow,
    ExperimentConfig,
    ExperimentMode,
    MeritRow,
    RealizationFailure,
    aggregate_realizations,
    load_config_file,
    resolve_config,
    run_realizations,
)
from mbl_tn_lioms.harness_pkg.tasks import merit_edm_rows, merit_tnm_rows, run_realization
from mbl_tn_lioms.harness_pkg.writers import aggregate_frame, raw_frame
from mbl_tn_lioms.settings import WORKERS_ENV_VAR


def _merit_row(realization: int, delta_total: float, disorder_w: float = 8.0) -> MeritRow:
    return MeritRow(
        method="tnm",
        size_param=4,
        disorder_w=disorder_w,
        realization=realization,
        site=5,
        delta_total=delta_total,
        delta_1=delta_total / 2,
        delta_2=delta_total / 2,
        seed=0,
    )


def test_load_config_file_key_value(tmp_path: Path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# figure of merit sweep\n"
        "disorder=4, 8   # two strengths\n"
        "realizations=3\n"
        "svg=true\n"
        "initial-state=0101\n"
        "\n"
        "delta=0.5\n",
        encoding="utf-8",
    )
    assert load_config_file(path) == {
        "disorder_list": "4, 8",
        "realizations": 3,
        "svg": True,
        "initial_state": "0101",
        "anisotropy_delta": 0.5,
    }


def test_load_config_file_yaml(tmp_path: Path):
    path = tmp_path / "run.yaml"
    path.write_text("realizations: 5\ndisorder: [4.0, 8.0]\nblock-legs: 2\n", encoding="utf-8")
    assert load_config_file(path) == {"realizations": 5, "disorder_list": [4.0, 8.0], "block_legs": 2}


@pytest.mark.parametrize(
    "name,content,test_description",
    [
        ("run.conf", "realizations\n", "Line without '='"),
        ("run.conf", "=3\n", "Line without a key"),
        ("run.yaml", "- 1\n- 2\n", "YAML list instead of a mapping"),
        ("run.yaml", "realizations: [1\n", "Broken YAML"),
    ],
)
def test_load_config_file_invalid(tmp_path: Path, name, content, test_description):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ArgumentError):
        load_config_file(path)


def test_load_config_file_missing(tmp_path: Path):
    with pytest.raises(ArgumentError):
        load_config_file(tmp_path / "absent.conf")


def test_resolve_config_precedence(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    """Command line beats environment, environment beats the config file."""
    path = tmp_path / "run.conf"
    path.write_text("realizations=3\nworkers=2\nseed=11\nt-points=\n", encoding="utf-8")
    monkeypatch.setenv(WORKERS_ENV_VAR, "3")

    cfg = resolve_config(ExperimentMode.Entangle, {"realizations": 7, "seed": None}, path)
    assert cfg.realizations == 7
    assert cfg.workers == 3
    assert cfg.seed == 11
    assert cfg.t_points == ExperimentConfig.model_fields["t_points"].default
    assert cfg.mode is ExperimentMode.Entangle


def test_resolve_config_without_file(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.delenv(WORKERS_ENV_VAR, raising=False)
    cfg = resolve_config(ExperimentMode.MeritTnm, {"disorder_list": "8,12", "block_legs": 2})
    assert cfg.disorder_list == (8.0, 12.0)
    assert cfg.block_legs == 2
    assert cfg.workers == 1


def test_resolve_config_rejects_unknown_keys(tmp_path: Path):
    path = tmp_path / "run.conf"
    path.write_text("realisations=3\n", encoding="utf-8")
    with pytest.raises(ArgumentError, match="realisations"):
        resolve_config(ExperimentMode.MeritTnm, {}, path)


def test_resolve_config_rejects_bad_environment(monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv(WORKERS_ENV_VAR, "many")
    with pytest.raises(ArgumentError):
        resolve_config(ExperimentMode.MeritTnm, {})


@pytest.mark.parametrize(
    "mode,given,expected_block_legs,expected_chain_sites,test_description",
    [
        (ExperimentMode.MeritTnm, {}, 4, None, "Tensor-network merit default"),
        (ExperimentMode.Entangle, {}, 4, None, "Entanglement default"),
        (ExperimentMode.MeritEdm, {}, None, 5, "Exact merit default"),
        (ExperimentMode.OracleCompare, {}, 4, 8, "Oracle default"),
        (ExperimentMode.OracleCompare, {"block_legs": 2}, 2, 4, "Oracle chain from block length"),
        (ExperimentMode.OracleCompare, {"chain_sites": 4}, 2, 4, "Oracle block length from chain"),
    ],
)
def test_experiment_config_sizes(mode, given, expected_block_legs, expected_chain_sites, test_description):
    cfg = ExperimentConfig(mode=mode, **given)
    assert cfg.block_legs == expected_block_legs, f"Failed: {test_description}"
    assert cfg.chain_sites == expected_chain_sites, f"Failed: {test_description}"


@pytest.mark.parametrize(
    "kwargs,test_description",
    [
        (dict(mode="merit-tnm", realizations=0), "No realizations"),
        (dict(mode="merit-tnm", disorder_list="a,b"), "Non-numeric disorder list"),
        (dict(mode="merit-tnm", disorder_list=()), "Empty disorder list"),
        (dict(mode="merit-tnm", disorder_list=(-1.0,)), "Negative disorder"),
        (dict(mode="merit-tnm", block_legs=3), "Odd block length"),
        (dict(mode="merit-tnm", seed=-1), "Negative seed"),
        (dict(mode="merit-tnm", seed=2 ** 64), "Seed too wide"),
        (dict(mode="merit-tnm", workers=0), "No workers"),
        (dict(mode="merit-tnm", initial_state="01010101"), "Initial state for a merit run"),
        (dict(mode="merit-edm", bridge=False), "Bridge switch for a merit run"),
        (dict(mode="entangle", t_min=10.0, t_max=1.0), "t_min above t_max"),
        (dict(mode="entangle", t_points=0), "No time points"),
        (dict(mode="entangle", initial_state="0101"), "Initial state of the wrong length"),
        (dict(mode="entangle", initial_state="0120aaaa"), "Initial state with non-bits"),
        (dict(mode="oracle-compare", chain_sites=8, block_legs=2), "Oracle window smaller than the chain"),
        (dict(mode="oracle-compare", chain_sites=6), "Oracle chain with an odd half"),
        (dict(mode="merit-edm", chain_sites=1), "Exact chain too short"),
        (dict(mode="merit-tnm", colour="blue"), "Unknown key"),
        (dict(mode="quench"), "Unknown mode"),
    ],
)
def test_experiment_config_invalid(kwargs, test_description):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


def test_experiment_config_derived_values():
    assert ExperimentConfig(mode="merit-edm", chain_sites=7).size_param == 7
    assert ExperimentConfig(mode="merit-tnm", block_legs=6).size_param == 6
    grid = ExperimentConfig(mode="entangle", t_min=1.0, t_max=100.0, t_points=3).time_grid()
    assert grid.points == pytest.approx((1.0, 10.0, 100.0))


def test_aggregate_single_row_has_zero_error():
    (cell,) = aggregate_realizations([_merit_row(0, 2.5)])
    assert cell.cell == {"method": "tnm", "size_param": 4, "disorder_w": 8.0, "site": 5}
    assert cell.mean["delta_total"] == 2.5
    assert cell.sem["delta_total"] == 0.0
    assert cell.count == 1


def test_aggregate_mean_and_standard_error():
    (cell,) = aggregate_realizations([_merit_row(0, 1.0), _merit_row(1, 3.0)])
    assert cell.mean == pytest.approx({"delta_total": 2.0, "delta_1": 1.0, "delta_2": 1.0})
    assert cell.sem["delta_total"] == pytest.approx(1.0)
    assert cell.count == 2


def test_aggregate_is_independent_of_row_order():
    rows = [_merit_row(r, 0.1 * (r + 1) ** 2, w) for w in (8.0, 12.0) for r in range(6)]
    shuffled = list(rows)
    random.Random(3).shuffle(shuffled)
    first = aggregate_realizations(rows)
    second = aggregate_realizations(shuffled)
    assert [c.model_dump() for c in first] == [c.model_dump() for c in second]
    assert [c.cell["disorder_w"] for c in first] == [8.0, 12.0]


def test_aggregate_argument_checks():
    with pytest.raises(ArgumentError):
        aggregate_realizations([])
    entropy = EntropyRow(block_legs=4, disorder_w=8.0, realization=0, time=1.0, entropy=0.1, seed=0)
    with pytest.raises(ArgumentError):
        aggregate_realizations([_merit_row(0, 1.0), entropy])


def test_frames_have_stable_columns():
    rows = [_merit_row(1, 3.0), _merit_row(0, 1.0)]
    raw = raw_frame(rows)
    assert list(raw.columns) == [
        "method", "size_param", "disorder_w", "realization", "site", "delta_total", "delta_1", "delta_2", "seed"
    ]
    assert raw["realization"].tolist() == [0, 1]

    aggregate = aggregate_frame(aggregate_realizations(rows), MeritRow)
    assert list(aggregate.columns) == [
        "method", "size_param", "disorder_w", "site",
        "delta_total_mean", "delta_total_sem", "delta_1_mean", "delta_1_sem", "delta_2_mean", "delta_2_sem", "n",
    ]
    assert aggregate["n"].tolist() == [2]


def test_merit_tasks_report_the_central_site():
    cfg = ExperimentConfig(mode="merit-tnm", block_legs=2, disorder_list=(8.0,), realizations=1)
    (row,) = merit_tnm_rows(cfg, 8.0, 0)
    assert (row.method, row.site, row.size_param) == ("tnm", 3, 2)
    assert row.delta_total == pytest.approx(row.delta_1 + row.delta_2)

    cfg = ExperimentConfig(mode="merit-edm", chain_sites=5, disorder_list=(8.0,), realizations=1)
    (row,) = merit_edm_rows(cfg, 8.0, 0)
    assert (row.method, row.site, row.size_param) == ("edm", 4, 5)
    assert 0.0 <= row.delta_1 < 1e-18


@pytest.mark.parametrize("chain_sites", [3, 4, 5])
@pytest.mark.parametrize("disorder_w", [8.0, 12.0, 16.0, 20.0])
def test_exact_lioms_have_no_window_merit(chain_sites, disorder_w):
    cfg = ExperimentConfig(mode="merit-edm", chain_sites=chain_sites, disorder_list=(disorder_w,), realizations=10)
    for realization in range(cfg.realizations):
        (row,) = merit_edm_rows(cfg, disorder_w, realization)
        assert 0.0 <= row.delta_1 < 1e-18


def test_run_realization_reports_capacity_failures():
    cfg = ExperimentConfig(mode="merit-tnm", block_legs=4, dense_limit=3)
    failure = run_realization(cfg, 8.0, 2)
    assert isinstance(failure, RealizationFailure)
    assert (failure.category, failure.realization, failure.disorder_w) == ("capacity", 2, 8.0)


async def test_run_realizations_keeps_submission_order():
    cfg = ExperimentConfig(mode="merit-tnm", block_legs=2, disorder_list=(12.0, 4.0), realizations=3)
    rows, failures = await run_realizations(cfg)
    assert failures == []
    assert [(row.disorder_w, row.realization) for row in rows] == [
        (12.0, 0), (12.0, 1), (12.0, 2), (4.0, 0), (4.0, 1), (4.0, 2)
    ]
    assert all(math.isfinite(row.delta_total) and row.delta_total >= 0 for row in rows)
