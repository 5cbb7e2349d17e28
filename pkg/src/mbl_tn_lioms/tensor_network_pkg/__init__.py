"""Two-layer tensor network construction of approximate LIOMs."""

from .functions import (
    central_layout,
    first_layer,
    project_and_expand,
    bridge_hamiltonian,
    second_layer,
    build_network,
    compose_window_unitary,
    tn_liom,
    liom_set,
)
from .structs import WindowLayout, TwoLayerUnitary

__all__ = [
    "central_layout",
    "first_layer",
    "project_and_expand",
    "bridge_hamiltonian",
    "second_layer",
    "build_network",
    "compose_window_unitary",
    "tn_liom",
    "liom_set",
    "WindowLayout",
    "TwoLayerUnitary",
]
