"""Post-quench entanglement entropy from the two-block network reduction."""

from .functions import (
    neel_state,
    rotate_to_liom_basis,
    offdiagonal_weight,
    diagonal_hamiltonian,
    evolve_two_block,
    von_neumann_entropy,
    tn_entropy_trace,
)
from .structs import DiagonalPath, TimeGrid, EntanglementTrace

__all__ = [
    "neel_state",
    "rotate_to_liom_basis",
    "offdiagonal_weight",
    "diagonal_hamiltonian",
    "evolve_two_block",
    "von_neumann_entropy",
    "tn_entropy_trace",
    "DiagonalPath",
    "TimeGrid",
    "EntanglementTrace",
]
