"""Dense diagonalization, eigenstate ordering and the full-chain exact oracle."""

import logging
import math
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from ..errors import ArgumentError, CapacityError, ContractError
from ..settings import DEFAULT_DENSE_LIMIT
from ..spin_model_pkg import (
    ChainSpec,
    DenseOperator,
    OperatorKind,
    SiteRange,
    build_hamiltonian,
    neel_bits,
    product_state,
    restrict,
)
from ..spin_model_pkg.utils import conjugate_diagonal, site_signs
from .structs import OrderedUnitary, RawEigensystem

logger = logging.getLogger(__name__)


def eig_hermitian(op: DenseOperator) -> RawEigensystem:
    """Diagonalize a Hermitian operator.

    Args:
        op: Operator tagged hermitian

    Returns:
        RawEigensystem with ascending eigenvalues and orthonormal eigenvectors

    Raises:
        ContractError: If the operator is not tagged hermitian
    """
    if op.kind is not OperatorKind.Hermitian:
        raise ContractError(f"eig_hermitian needs a hermitian operator, got kind '{op.kind.value}'")
    values, vectors = scipy.linalg.eigh(op.matrix)
    return RawEigensystem(values=values, vectors=vectors, source_support=op.support)


def order_eigenstates(raw: RawEigensystem) -> OrderedUnitary:
    """Rearrange eigenvectors into a quasi-local unitary.

    Every eigenvector is assigned the basis index on which it has its largest
    amplitude. Conflicts are resolved greedily over all (basis, eigenvector)
    amplitudes in descending magnitude, ties going to the lower basis index and then
    the lower eigenvector index. The assigned amplitude of each column is rotated to
    be real and nonnegative.
    """
    vectors = raw.vectors
    dim = vectors.shape[0]
    magnitudes = np.abs(vectors)

    # flat index = basis * dim + eigen, so a stable sort breaks ties as required
    order = np.argsort(-magnitudes.ravel(), kind="stable")

    basis_taken = np.zeros(dim, dtype=bool)
    eigen_taken = np.zeros(dim, dtype=bool)
    permutation = np.full(dim, -1, dtype=np.int64)
    assigned = 0
    for start in range(0, order.size, dim):
        chunk = order[start:start + dim]
        basis, eigen = np.divmod(chunk, dim)
        live = ~basis_taken[basis] & ~eigen_taken[eigen]
        for b, k in zip(basis[live].tolist(), eigen[live].tolist()):
            if basis_taken[b] or eigen_taken[k]:
                continue
            basis_taken[b] = True
            eigen_taken[k] = True
            permutation[k] = b
            assigned += 1
        if assigned == dim:
            break

    columns = np.arange(dim)
    dominant = vectors[permutation, columns]
    dominant_abs = np.abs(dominant)
    gauge = np.ones(dim, dtype=np.complex128)
    nonzero = dominant_abs > 0
    gauge[nonzero] = dominant[nonzero] / dominant_abs[nonzero]

    matrix = np.empty_like(vectors)
    matrix[:, permutation] = vectors * gauge.conj()[np.newaxis, :]
    matrix[permutation, permutation] = dominant_abs
    energies = np.empty(dim)
    energies[permutation] = raw.values

    return OrderedUnitary(
        matrix=matrix,
        permutation=permutation,
        energies=energies,
        source_support=raw.source_support,
    )


def diagonalize_ordered(op: DenseOperator) -> OrderedUnitary:
    """order_eigenstates(eig_hermitian(op))."""
    return order_eigenstates(eig_hermitian(op))


def exact_liom(spec: ChainSpec, site: int, dense_limit: int = DEFAULT_DENSE_LIMIT) -> DenseOperator:
    """Exact LIOM τ = U σz_site U† from the ordered eigenbasis of the full chain.

    Raises:
        CapacityError: If the chain is longer than `dense_limit` sites
        ArgumentError: If `site` is not a chain site
    """
    _check_capacity(spec.n_sites, dense_limit)
    support = spec.full_range
    slot = support.slot(site)
    unitary = diagonalize_ordered(build_hamiltonian(spec, support))
    tau = conjugate_diagonal(unitary.matrix, site_signs(support.width, slot))
    return DenseOperator(support=support, matrix=tau, kind=OperatorKind.Hermitian)


def exact_window_liom(
    spec: ChainSpec, window: SiteRange, site: int, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> DenseOperator:
    """Exact LIOM of the isolated window Hamiltonian H_C, placed back on `window`.

    This is the one-layer construction whose interior merit vanishes, leaving only
    the boundary contribution.
    """
    if not window.contains(site):
        raise ArgumentError(f"Site {site} lies outside window {window}")
    local = exact_liom(restrict(spec, window), window.slot(site) + 1, dense_limit)
    return DenseOperator(support=window, matrix=local.matrix, kind=OperatorKind.Hermitian)


def exact_entropy_trace(
    spec: ChainSpec,
    cut: int,
    times: Sequence[float],
    initial_bits: Optional[str] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> list[float]:
    """Exact half-chain entanglement entropy after a quench from a product state.

    Args:
        spec: Full chain
        cut: Left part is sites [1, cut], right part [cut + 1, N]
        times: Evaluation times
        initial_bits: Product state as a bit string (default: Néel)
        dense_limit: Largest chain handled densely

    Returns:
        Von Neumann entropy in nats, one value per time
    """
    # Runtime import avoids the circular import through the tensor network package
    from ..entanglement_pkg.functions import von_neumann_entropy

    n = spec.n_sites
    _check_capacity(n, dense_limit)
    if not 1 <= cut < n:
        raise ArgumentError(f"cut must lie in [1, {n - 1}], got {cut}")
    if not all(math.isfinite(t) for t in times):
        raise ArgumentError("times must be finite")
    bits = initial_bits if initial_bits is not None else neel_bits(n)
    if len(bits) != n:
        raise ArgumentError(f"Initial state has {len(bits)} sites, chain has {n}")

    raw = eig_hermitian(build_hamiltonian(spec, spec.full_range))
    coefficients = raw.vectors.conj().T @ product_state(bits)
    entropies = []
    for t in times:
        psi = raw.vectors @ (np.exp(-1j * raw.values * t) * coefficients)
        amplitudes = psi.reshape(2 ** cut, 2 ** (n - cut))
        rho = amplitudes @ amplitudes.conj().T
        entropies.append(von_neumann_entropy(rho))
    return entropies


def _check_capacity(n_sites: int, dense_limit: int) -> None:
    if n_sites > dense_limit:
        raise CapacityError(
            f"A {n_sites}-site dense diagonalization exceeds the dense limit of {dense_limit} sites; "
            "raise it with --dense-limit if memory allows (2^N x 2^N complex matrices)"
        )
