"""Pauli operators, XXZ Hamiltonians and disorder realizations."""

from .functions import (
    sample_fields,
    sample_chain,
    restrict,
    pauli,
    build_hamiltonian,
    bond_term,
    field_term,
    embed_operator,
    trace_h_squared,
    neel_bits,
    product_state,
)
from .structs import ChainSpec, SiteRange, DenseOperator, OperatorKind, PauliAxis

__all__ = [
    "sample_fields",
    "sample_chain",
    "restrict",
    "pauli",
    "build_hamiltonian",
    "bond_term",
    "field_term",
    "embed_operator",
    "trace_h_squared",
    "neel_bits",
    "product_state",
    "ChainSpec",
    "SiteRange",
    "DenseOperator",
    "OperatorKind",
    "PauliAxis",
]
