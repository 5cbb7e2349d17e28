import math
from enum import Enum
from pathlib import Path
from typing import Any, ClassVar, Optional, Self, Union

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..entanglement_pkg import DiagonalPath, TimeGrid
from ..errors import ArgumentError
from ..settings import (
    DEFAULT_ANISOTROPY_DELTA,
    DEFAULT_COUPLING_J,
    DEFAULT_DENSE_LIMIT,
    DEFAULT_DISORDER_LIST,
    DEFAULT_REALIZATIONS,
    DEFAULT_T_MAX,
    DEFAULT_T_MIN,
    DEFAULT_T_POINTS,
)

DEFAULT_BLOCK_LEGS = 4
DEFAULT_EDM_CHAIN_SITES = 5
DEFAULT_ORACLE_CHAIN_SITES = 8


class ExperimentMode(str, Enum):
    """Experiments the harness can run."""

    MeritTnm = "merit-tnm"
    MeritEdm = "merit-edm"
    Entangle = "entangle"
    OracleCompare = "oracle-compare"


class MeritMethod(str, Enum):
    """How the LIOM of a figure-of-merit run is built."""

    Tnm = "tnm"
    Edm = "edm"


class ExperimentConfig(BaseModel):
    """Fully resolved configuration of one experiment run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: ExperimentMode
    coupling_j: float = DEFAULT_COUPLING_J
    anisotropy_delta: float = DEFAULT_ANISOTROPY_DELTA
    disorder_list: tuple[float, ...] = DEFAULT_DISORDER_LIST
    block_legs: Optional[int] = None
    chain_sites: Optional[int] = None
    realizations: int = DEFAULT_REALIZATIONS
    seed: int = 0
    t_min: float = DEFAULT_T_MIN
    t_max: float = DEFAULT_T_MAX
    t_points: int = DEFAULT_T_POINTS
    out: Path = Path("results")
    dense_limit: int = DEFAULT_DENSE_LIMIT
    workers: int = 1
    initial_state: Optional[str] = None
    diag_path: DiagonalPath = DiagonalPath.Auto
    bridge: bool = True
    svg: bool = False

    @field_validator("disorder_list", mode="before")
    @classmethod
    def _parse_disorder_list(cls, value: Any) -> Any:
        if isinstance(value, (int, float)):
            return (value,)
        if isinstance(value, str):
            try:
                return tuple(float(part) for part in value.split(",") if part.strip())
            except ValueError:
                raise ArgumentError(f"Disorder list must be comma-separated numbers, got '{value}'")
        return value

    @model_validator(mode="before")
    @classmethod
    def _fill_sizes(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        mode = ExperimentMode(data.get("mode"))
        if mode in (ExperimentMode.MeritTnm, ExperimentMode.Entangle):
            data.setdefault("block_legs", DEFAULT_BLOCK_LEGS)
        elif mode is ExperimentMode.MeritEdm:
            data.setdefault("chain_sites", DEFAULT_EDM_CHAIN_SITES)
        else:
            # the oracle window is the whole chain
            if data.get("chain_sites") is None and data.get("block_legs") is None:
                data["chain_sites"] = DEFAULT_ORACLE_CHAIN_SITES
            if data.get("chain_sites") is None:
                data["chain_sites"] = 2 * data["block_legs"]
            if data.get("block_legs") is None:
                data["block_legs"] = data["chain_sites"] // 2
        return data

    @model_validator(mode="after")
    def _check_config(self) -> Self:
        if self.realizations < 1:
            raise ArgumentError(f"realizations must be at least 1, got {self.realizations}")
        if not self.disorder_list:
            raise ArgumentError("The disorder list must not be empty")
        if not all(math.isfinite(w) and w >= 0 for w in self.disorder_list):
            raise ArgumentError(f"Disorder strengths must be finite and nonnegative, got {self.disorder_list}")
        if not 0 <= self.seed < 2 ** 64:
            raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 < self.t_min < self.t_max:
            raise ArgumentError(f"Need 0 < t_min < t_max, got t_min={self.t_min}, t_max={self.t_max}")
        if self.t_points < 1:
            raise ArgumentError(f"t_points must be positive, got {self.t_points}")
        if self.workers < 1:
            raise ArgumentError(f"workers must be at least 1, got {self.workers}")
        if self.dense_limit < 2:
            raise ArgumentError(f"dense_limit must be at least 2, got {self.dense_limit}")
        if self.block_legs is not None and (self.block_legs < 2 or self.block_legs % 2):
            raise ArgumentError(f"block_legs must be even and at least 2, got {self.block_legs}")
        if self.mode is ExperimentMode.MeritEdm and self.chain_sites < 2:
            raise ArgumentError(f"chain_sites must be at least 2, got {self.chain_sites}")
        if self.mode is ExperimentMode.OracleCompare and self.chain_sites != 2 * self.block_legs:
            raise ArgumentError(
                f"The oracle window is the whole chain: chain_sites ({self.chain_sites}) must equal "
                f"2 * block_legs ({self.block_legs})"
            )
        if not self.bridge and self.mode not in (ExperimentMode.Entangle, ExperimentMode.OracleCompare):
            raise ArgumentError("Disabling the bridge unitary only applies to entanglement runs")
        if self.initial_state is not None:
            if self.mode not in (ExperimentMode.Entangle, ExperimentMode.OracleCompare):
                raise ArgumentError("initial_state only applies to entanglement runs")
            if len(self.initial_state) != 2 * self.block_legs or set(self.initial_state) - {"0", "1"}:
                raise ArgumentError(
                    f"initial_state must be a 0/1 string of {2 * self.block_legs} sites, got '{self.initial_state}'"
                )
        return self

    @property
    def size_param(self) -> int:
        """Block length for tensor-network runs, chain length for exact-diagonalization runs."""
        return self.chain_sites if self.mode is ExperimentMode.MeritEdm else self.block_legs

    def time_grid(self) -> TimeGrid:
        return TimeGrid.log_spaced(self.t_min, self.t_max, self.t_points)


class MeritRow(BaseModel):
    """One realization of a figure-of-merit experiment."""

    KEY_COLUMNS: ClassVar[tuple[str, ...]] = ("method", "size_param", "disorder_w", "site")
    VALUE_COLUMNS: ClassVar[tuple[str, ...]] = ("delta_total", "delta_1", "delta_2")

    method: MeritMethod
    size_param: int
    disorder_w: float
    realization: int
    site: int
    delta_total: float
    delta_1: float
    delta_2: float
    seed: int


class EntropyRow(BaseModel):
    """Entanglement entropy of one realization at one time."""

    KEY_COLUMNS: ClassVar[tuple[str, ...]] = ("block_legs", "disorder_w", "time")
    VALUE_COLUMNS: ClassVar[tuple[str, ...]] = ("entropy",)

    block_legs: int
    disorder_w: float
    realization: int
    time: float
    entropy: float
    seed: int


class OracleRow(BaseModel):
    """Exact and tensor-network entropies of one realization at one time."""

    KEY_COLUMNS: ClassVar[tuple[str, ...]] = ("chain_sites", "block_legs", "disorder_w", "time")
    VALUE_COLUMNS: ClassVar[tuple[str, ...]] = ("entropy_exact", "entropy_tn", "deviation")

    chain_sites: int
    block_legs: int
    disorder_w: float
    realization: int
    time: float
    entropy_exact: float
    entropy_tn: float
    deviation: float
    seed: int


ExperimentRow = Union[MeritRow, EntropyRow, OracleRow]


class RealizationFailure(BaseModel):
    """Error raised while computing one (W, realization) task."""

    disorder_w: float
    realization: int
    category: str
    message: str


class AggregateStats(BaseModel):
    """Mean, standard error and count of every value column in one aggregation cell."""

    model_config = ConfigDict(frozen=True)

    cell: dict[str, Union[str, int, float]]
    mean: dict[str, float]
    sem: dict[str, float]
    count: int

    @model_validator(mode="after")
    def _check_stats(self) -> Self:
        if self.count < 1:
            raise ArgumentError(f"An aggregation cell needs at least one row, got {self.count}")
        if self.mean.keys() != self.sem.keys():
            raise ArgumentError("Mean and standard error must cover the same columns")
        if any(s < 0 for s in self.sem.values()):
            raise ArgumentError("Standard errors must be nonnegative")
        return self


class ExperimentResult(BaseModel):
    """Outcome of one experiment run: rows and aggregates on success, failures otherwise."""

    mode: ExperimentMode
    rows: list[ExperimentRow]
    aggregates: list[AggregateStats]
    failures: list[RealizationFailure]
    written: list[Path]
