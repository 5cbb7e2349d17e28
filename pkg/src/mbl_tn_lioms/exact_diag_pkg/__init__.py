"""Exact diagonalization, eigenstate ordering and the full-chain oracle."""

from .functions import (
    eig_hermitian,
    order_eigenstates,
    diagonalize_ordered,
    exact_liom,
    exact_window_liom,
    exact_entropy_trace,
)
from .structs import RawEigensystem, OrderedUnitary

__all__ = [
    "eig_hermitian",
    "order_eigenstates",
    "diagonalize_ordered",
    "exact_liom",
    "exact_window_liom",
    "exact_entropy_trace",
    "RawEigensystem",
    "OrderedUnitary",
]
