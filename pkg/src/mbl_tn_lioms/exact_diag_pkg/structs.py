from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..errors import ArgumentError, ContractError
from ..spin_model_pkg.structs import SiteRange, check_unitary


class RawEigensystem(BaseModel):
    """Eigenvalues in ascending order; column k of `vectors` belongs to values[k]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray
    vectors: np.ndarray
    source_support: SiteRange

    @field_validator("vectors", mode="before")
    @classmethod
    def _as_complex(cls, value: Any) -> np.ndarray:
        return np.ascontiguousarray(value, dtype=np.complex128)

    @field_validator("values", mode="before")
    @classmethod
    def _as_real(cls, value: Any) -> np.ndarray:
        return np.ascontiguousarray(value, dtype=np.float64)

    @model_validator(mode="after")
    def _check_shapes(self) -> Self:
        dim = self.source_support.dimension
        if self.vectors.shape != (dim, dim) or self.values.shape != (dim,):
            raise ArgumentError(
                f"Eigensystem shapes {self.values.shape}/{self.vectors.shape} do not match support "
                f"{self.source_support}"
            )
        if np.any(np.diff(self.values) < 0):
            raise ContractError("Eigenvalues must be sorted in ascending order")
        self.values.setflags(write=False)
        self.vectors.setflags(write=False)
        return self


class OrderedUnitary(BaseModel):
    """Eigenvector matrix rearranged so column j is the eigenstate assigned to basis index j.

    `permutation[k]` is the basis index assigned to raw eigenvector k; `energies[j]` is
    the eigenvalue of column j, so U† H U ≈ diag(energies).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray
    permutation: np.ndarray
    energies: np.ndarray
    source_support: SiteRange

    @model_validator(mode="after")
    def _check_unitary(self) -> Self:
        dim = self.source_support.dimension
        if self.matrix.shape != (dim, dim):
            raise ArgumentError(f"Unitary shape {self.matrix.shape} does not match support {self.source_support}")
        if not np.array_equal(np.sort(self.permutation), np.arange(dim)):
            raise ContractError("Eigenstate assignment is not a bijection")
        check_unitary(self.matrix)
        for array in (self.matrix, self.permutation, self.energies):
            array.setflags(write=False)
        return self

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]
