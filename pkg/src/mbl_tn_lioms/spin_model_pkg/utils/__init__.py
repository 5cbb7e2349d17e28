"""Utility modules for dense operator algebra."""

from .linalg import (
    IDENTITY_2,
    PAULI_MATRICES,
    kron_chain,
    pad_identity,
    hermitize,
    partial_trace_outer,
    conjugate_diagonal,
    site_signs,
)

__all__ = [
    "IDENTITY_2",
    "PAULI_MATRICES",
    "kron_chain",
    "pad_identity",
    "hermitize",
    "partial_trace_outer",
    "conjugate_diagonal",
    "site_signs",
]
