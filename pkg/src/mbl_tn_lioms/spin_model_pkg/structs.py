import logging
import math
from enum import Enum
from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import ArgumentError, ContractError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
# Above this dimension unitarity is probed with a few vectors instead of forming M†M
FULL_UNITARY_CHECK_DIM = 1024


class PauliAxis(str, Enum):
    """Pauli operator axis."""

    X = "x"
    Y = "y"
    Z = "z"


class OperatorKind(str, Enum):
    """Structural tag carried by a DenseOperator."""

    Hermitian = "hermitian"
    Unitary = "unitary"
    General = "general"


class SiteRange(BaseModel):
    """Contiguous, inclusive range of 1-based chain sites."""

    model_config = ConfigDict(frozen=True)

    first: int
    last: int

    @model_validator(mode="after")
    def _check_order(self) -> Self:
        if self.first < 1 or self.last < self.first:
            raise ArgumentError(f"Invalid site range [{self.first}, {self.last}]")
        return self

    @property
    def width(self) -> int:
        return self.last - self.first + 1

    @property
    def dimension(self) -> int:
        return 2 ** self.width

    def sites(self) -> range:
        return range(self.first, self.last + 1)

    def contains(self, site: int) -> bool:
        return self.first <= site <= self.last

    def covers(self, other: "SiteRange") -> bool:
        return self.first <= other.first and other.last <= self.last

    def slot(self, site: int) -> int:
        """0-based tensor slot of a site inside this range (site `first` is slot 0)."""
        if not self.contains(site):
            raise ArgumentError(f"Site {site} lies outside [{self.first}, {self.last}]")
        return site - self.first

    def middle_half(self) -> "SiteRange":
        """The central half of an even-width range, e.g. [3, 6] of [1, 8]."""
        if self.width % 4 != 0:
            raise ArgumentError(f"Range [{self.first}, {self.last}] has no symmetric middle half")
        quarter = self.width // 4
        return SiteRange(first=self.first + quarter, last=self.last - quarter)

    def __str__(self) -> str:
        return f"[{self.first}, {self.last}]"


class ChainSpec(BaseModel):
    """A concrete disordered XXZ chain: couplings plus one field value per site."""

    model_config = ConfigDict(frozen=True)

    n_sites: int
    coupling_j: float
    anisotropy_delta: float
    disorder_w: float
    fields: tuple[float, ...]

    @model_validator(mode="after")
    def _check_chain(self) -> Self:
        if self.n_sites < 2:
            raise ArgumentError(f"A chain needs at least 2 sites, got {self.n_sites}")
        if len(self.fields) != self.n_sites:
            raise ArgumentError(f"Expected {self.n_sites} field values, got {len(self.fields)}")
        numbers = (self.coupling_j, self.anisotropy_delta, self.disorder_w, *self.fields)
        if not all(math.isfinite(x) for x in numbers):
            raise ArgumentError("Chain parameters must all be finite")
        if self.disorder_w < 0:
            raise ArgumentError(f"Disorder width must be nonnegative, got {self.disorder_w}")
        for i, h in enumerate(self.fields, start=1):
            if abs(h) > self.disorder_w:
                raise ArgumentError(f"Field h_{i}={h} lies outside [-{self.disorder_w}, {self.disorder_w}]")
        return self

    @property
    def full_range(self) -> SiteRange:
        return SiteRange(first=1, last=self.n_sites)

    def field(self, site: int) -> float:
        return self.fields[site - 1]


class DenseOperator(BaseModel):
    """Complex square matrix acting on a contiguous window of sites."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    support: SiteRange
    matrix: np.ndarray
    kind: OperatorKind = OperatorKind.General

    @field_validator("matrix", mode="before")
    @classmethod
    def _as_complex(cls, value: Any) -> np.ndarray:
        return np.ascontiguousarray(value, dtype=np.complex128)

    @model_validator(mode="after")
    def _check_matrix(self) -> Self:
        m = self.matrix
        dim = self.support.dimension
        if m.shape != (dim, dim):
            raise ArgumentError(f"Matrix shape {m.shape} does not match support {self.support} (dimension {dim})")
        if self.kind is OperatorKind.Hermitian:
            deviation = np.max(np.abs(m - m.conj().T))
            if deviation >= HERMITIAN_TOL:
                raise ContractError(f"Operator tagged hermitian deviates from M† by {deviation:.3e}")
        elif self.kind is OperatorKind.Unitary:
            check_unitary(m)
        m.setflags(write=False)
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def check_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> None:
    """Raise ContractError unless max|M†M - I| < tol."""
    dim = m.shape[0]
    if dim <= FULL_UNITARY_CHECK_DIM:
        deviation = np.max(np.abs(m.conj().T @ m - np.eye(dim)))
    else:
        logger.debug("Probing unitarity of a %d-dimensional matrix with random vectors", dim)
        probes = np.random.default_rng(0).standard_normal((dim, 3))
        probes /= np.linalg.norm(probes, axis=0)
        deviation = np.max(np.abs(m.conj().T @ (m @ probes) - probes))
    if deviation >= tol:
        raise ContractError(f"Operator tagged unitary deviates from unitarity by {deviation:.3e}")
