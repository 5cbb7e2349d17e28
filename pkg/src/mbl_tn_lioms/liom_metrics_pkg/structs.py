from typing import Self

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import ContractError

SPLIT_TOL = 1e-9


class MeritReport(BaseModel):
    """Figure of merit of one LIOM, split into window and window-edge contributions.

    `size_param` is the block length b for tensor-network LIOMs and the chain length
    for exact-diagonalization LIOMs.
    """

    model_config = ConfigDict(frozen=True)

    site: int
    delta_total: float
    delta_interior: float
    delta_boundary: float
    disorder_w: float
    size_param: int
    realization: int

    @model_validator(mode="after")
    def _check_split(self) -> Self:
        mismatch = abs(self.delta_total - self.delta_interior - self.delta_boundary)
        if mismatch > SPLIT_TOL:
            raise ContractError(f"Merit split does not add up (off by {mismatch:.3e})")
        if self.delta_total < -SPLIT_TOL:
            raise ContractError(f"Figure of merit must be nonnegative, got {self.delta_total}")
        return self
