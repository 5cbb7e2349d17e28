"""Small dense linear-algebra helpers shared by all modules.

Basis convention: site `first` of a range is the most significant bit of the basis
index, bit 0 is spin-up and carries sigma^z eigenvalue +1.
"""

from functools import reduce

import numpy as np

IDENTITY_2 = np.eye(2, dtype=np.complex128)
PAULI_MATRICES = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def kron_chain(factors: list[np.ndarray]) -> np.ndarray:
    """Kronecker product of a list of matrices, leftmost factor most significant."""
    return reduce(np.kron, factors, np.ones((1, 1), dtype=np.complex128))


def pad_identity(matrix: np.ndarray, left_sites: int, right_sites: int) -> np.ndarray:
    """I(2^left) ⊗ matrix ⊗ I(2^right)."""
    out = matrix
    if left_sites:
        out = np.kron(np.eye(2 ** left_sites, dtype=np.complex128), out)
    if right_sites:
        out = np.kron(out, np.eye(2 ** right_sites, dtype=np.complex128))
    return out


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """(M + M†) / 2."""
    return 0.5 * (matrix + matrix.conj().T)


def partial_trace_outer(matrix: np.ndarray, left_sites: int, kept_sites: int, right_sites: int) -> np.ndarray:
    """Normalized partial trace over the outer sites of a (left, kept, right) split.

    Divides by the dimension of the traced space, so the identity maps to the identity.
    """
    dl, dk, dr = 2 ** left_sites, 2 ** kept_sites, 2 ** right_sites
    tensor = matrix.reshape(dl, dk, dr, dl, dk, dr)
    return np.einsum("akbacb->kc", tensor) / (dl * dr)


def conjugate_diagonal(unitary: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """U diag(signs) U† without forming the diagonal matrix."""
    return hermitize((unitary * signs[np.newaxis, :]) @ unitary.conj().T)


def site_signs(width: int, slot: int) -> np.ndarray:
    """Diagonal of sigma^z at a 0-based slot of a `width`-site register."""
    indices = np.arange(2 ** width)
    bits = (indices >> (width - 1 - slot)) & 1
    return 1.0 - 2.0 * bits
