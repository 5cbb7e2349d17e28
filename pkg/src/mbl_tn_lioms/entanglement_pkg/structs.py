import math
from enum import Enum
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import ArgumentError, ContractError

ENTROPY_BOUND_TOL = 1e-9


class DiagonalPath(str, Enum):
    """How diag(U_C† H U_C) is evaluated."""

    Auto = "auto"
    Dense = "dense"
    TermWise = "termwise"


class TimeGrid(BaseModel):
    """Strictly increasing positive evaluation times (units of 1/J)."""

    model_config = ConfigDict(frozen=True)

    points: tuple[float, ...]

    @model_validator(mode="after")
    def _check_points(self) -> Self:
        if not self.points:
            raise ArgumentError("A time grid needs at least one point")
        if not all(math.isfinite(t) and t > 0 for t in self.points):
            raise ArgumentError("Time grid points must be finite and positive")
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ArgumentError("Time grid points must be strictly increasing")
        return self

    @classmethod
    def log_spaced(cls, t_min: float, t_max: float, n_points: int) -> "TimeGrid":
        """`n_points` times spaced evenly in log t on [t_min, t_max]."""
        if n_points < 1:
            raise ArgumentError(f"t_points must be positive, got {n_points}")
        if not 0 < t_min:
            raise ArgumentError(f"t_min must be positive, got {t_min}")
        if n_points > 1 and not t_min < t_max:
            raise ArgumentError(f"t_min must be smaller than t_max, got {t_min} >= {t_max}")
        points = np.logspace(math.log10(t_min), math.log10(t_max), n_points) if n_points > 1 else [t_min]
        return cls(points=tuple(float(t) for t in points))

    def __len__(self) -> int:
        return len(self.points)


class EntanglementTrace(BaseModel):
    """Entanglement entropy (nats) of the left half of a window, one value per grid time."""

    model_config = ConfigDict(frozen=True)

    grid: TimeGrid
    entropy: tuple[float, ...]
    block_legs: int
    disorder_w: float
    seed: int
    realization: int

    @model_validator(mode="after")
    def _check_entropy(self) -> Self:
        if len(self.entropy) != len(self.grid):
            raise ArgumentError(f"Got {len(self.entropy)} entropies for {len(self.grid)} times")
        bound = self.block_legs * math.log(2) + ENTROPY_BOUND_TOL
        for t, s in zip(self.grid.points, self.entropy):
            if not 0 <= s <= bound:
                raise ContractError(f"Entropy {s} at t={t} lies outside [0, {bound}]")
        return self
