from typing import Self

from pydantic import BaseModel, ConfigDict, model_validator

from ..errors import ArgumentError
from ..exact_diag_pkg.structs import OrderedUnitary
from ..spin_model_pkg.structs import SiteRange


class WindowLayout(BaseModel):
    """Geometry of a two-layer network on a window of 2b sites.

    The first layer holds two b-site blocks splitting the window in half; the
    second layer holds one b-site bridge block over the middle half.
    """

    model_config = ConfigDict(frozen=True)

    block_legs: int
    window: SiteRange

    @model_validator(mode="after")
    def _check_geometry(self) -> Self:
        b = self.block_legs
        if b < 2 or b % 2:
            raise ArgumentError(f"block_legs must be even and at least 2, got {b}")
        if self.window.width != 2 * b:
            raise ArgumentError(f"Window {self.window} must hold exactly {2 * b} sites")
        return self

    @classmethod
    def at(cls, first: int, block_legs: int) -> "WindowLayout":
        """Layout whose window starts at chain site `first`."""
        return cls(block_legs=block_legs, window=SiteRange(first=first, last=first + 2 * block_legs - 1))

    @property
    def quarter(self) -> int:
        return self.block_legs // 2

    @property
    def left_block(self) -> SiteRange:
        return SiteRange(first=self.window.first, last=self.window.first + self.block_legs - 1)

    @property
    def right_block(self) -> SiteRange:
        return SiteRange(first=self.window.first + self.block_legs, last=self.window.last)

    @property
    def middle(self) -> SiteRange:
        """Support of the bridge unitary; also the sites whose LIOMs the window defines."""
        return self.window.middle_half()

    @property
    def left_keep(self) -> SiteRange:
        """Right half of the left block, kept when projecting the left block onto the bridge."""
        return SiteRange(first=self.middle.first, last=self.left_block.last)

    @property
    def right_keep(self) -> SiteRange:
        """Left half of the right block, kept when projecting the right block onto the bridge."""
        return SiteRange(first=self.right_block.first, last=self.middle.last)

    @property
    def center_site(self) -> int:
        """Left-middle site n0 of the window."""
        return self.left_block.last


class TwoLayerUnitary(BaseModel):
    """First-layer block unitaries plus the second-layer bridge unitary of one window."""

    model_config = ConfigDict(frozen=True)

    layout: WindowLayout
    u_left: OrderedUnitary
    u_right: OrderedUnitary
    u_bridge: OrderedUnitary

    @model_validator(mode="after")
    def _check_supports(self) -> Self:
        expected = {
            "u_left": self.layout.left_block,
            "u_right": self.layout.right_block,
            "u_bridge": self.layout.middle,
        }
        for name, support in expected.items():
            actual = getattr(self, name).source_support
            if actual != support:
                raise ArgumentError(f"{name} acts on {actual}, expected {support}")
        return self
