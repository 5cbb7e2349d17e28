"""Figure of merit and locality measures for approximate LIOMs."""

from .functions import (
    merit,
    merit_commutator,
    merit_split,
    merit_split_window,
    sigma_merit_analytic,
    commutator_norm,
    locality_profile,
)
from .structs import MeritReport

__all__ = [
    "merit",
    "merit_commutator",
    "merit_split",
    "merit_split_window",
    "sigma_merit_analytic",
    "commutator_norm",
    "locality_profile",
    "MeritReport",
]
