"""Pauli operators, XXZ Hamiltonians on site windows, and disorder sampling."""

import math

import numpy as np

from ..errors import ArgumentError
from .structs import ChainSpec, DenseOperator, OperatorKind, PauliAxis, SiteRange
from .utils.linalg import PAULI_MATRICES, pad_identity

_MAX_SEED = 2 ** 64


def sample_fields(seed: int, realization: int, n_sites: int, disorder_w: float) -> list[float]:
    """Draw the random fields h_i of one disorder realization.

    The stream is a Philox counter-based generator keyed on (seed, realization), so
    realization k always yields the same fields, whatever order realizations are
    computed in and whichever worker computes them. Site i receives the i-th draw.

    Args:
        seed: 64-bit experiment seed
        realization: Nonnegative realization index
        n_sites: Number of sites (>= 2)
        disorder_w: Half-width W of the uniform distribution [-W, W]

    Returns:
        n_sites field values, each uniform on [-disorder_w, disorder_w]

    Raises:
        ArgumentError: If any argument is out of range
    """
    if n_sites < 2:
        raise ArgumentError(f"n_sites must be at least 2, got {n_sites}")
    if not 0 <= seed < _MAX_SEED:
        raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
    if realization < 0:
        raise ArgumentError(f"realization must be nonnegative, got {realization}")
    if not math.isfinite(disorder_w) or disorder_w < 0:
        raise ArgumentError(f"disorder_w must be finite and nonnegative, got {disorder_w}")

    seed_sequence = np.random.SeedSequence(entropy=seed, spawn_key=(realization,))
    rng = np.random.Generator(np.random.Philox(seed_sequence))
    values = disorder_w * (2.0 * rng.random(n_sites) - 1.0)
    # + 0.0 turns the -0.0 produced for W = 0 into 0.0
    return [float(v) + 0.0 for v in values]


def sample_chain(
    seed: int,
    realization: int,
    n_sites: int,
    disorder_w: float,
    coupling_j: float = 1.0,
    anisotropy_delta: float = 1.0,
) -> ChainSpec:
    """Sample the fields of one realization and wrap them in a ChainSpec."""
    return ChainSpec(
        n_sites=n_sites,
        coupling_j=coupling_j,
        anisotropy_delta=anisotropy_delta,
        disorder_w=disorder_w,
        fields=tuple(sample_fields(seed, realization, n_sites, disorder_w)),
    )


def restrict(spec: ChainSpec, window: SiteRange) -> ChainSpec:
    """The isolated sub-chain living on `window`, renumbered from site 1."""
    _check_within_chain(spec, window)
    return ChainSpec(
        n_sites=window.width,
        coupling_j=spec.coupling_j,
        anisotropy_delta=spec.anisotropy_delta,
        disorder_w=spec.disorder_w,
        fields=spec.fields[window.first - 1:window.last],
    )


def pauli(site: int, axis: PauliAxis | str, support: SiteRange) -> DenseOperator:
    """Pauli matrix sigma^axis on `site`, tensored with identities over `support`."""
    axis = PauliAxis(axis)
    slot = support.slot(site)
    matrix = pad_identity(PAULI_MATRICES[axis.value], slot, support.width - slot - 1)
    return DenseOperator(support=support, matrix=matrix, kind=OperatorKind.Hermitian)


def build_hamiltonian(spec: ChainSpec, support: SiteRange) -> DenseOperator:
    """XXZ Hamiltonian of the bonds and fields lying inside `support`.

    H = J Σ (σxσx + σyσy) + Δ Σ σzσz + Σ h_i σz, with open boundaries at the window
    edges. Diagonal terms are evaluated from the basis-index bits and the flip-flop
    term connects index pairs that differ by an antiparallel neighbouring pair.
    """
    _check_within_chain(spec, support)
    width = support.width
    dim = support.dimension
    indices = np.arange(dim)
    z = [1.0 - 2.0 * ((indices >> (width - 1 - slot)) & 1) for slot in range(width)]

    diagonal = np.zeros(dim)
    for slot, site in enumerate(support.sites()):
        diagonal += spec.field(site) * z[slot]
    for slot in range(width - 1):
        diagonal += spec.anisotropy_delta * z[slot] * z[slot + 1]
    matrix = np.diag(diagonal).astype(np.complex128)

    for slot in range(width - 1):
        antiparallel = indices[z[slot] != z[slot + 1]]
        mask = (1 << (width - 1 - slot)) | (1 << (width - 2 - slot))
        matrix[antiparallel ^ mask, antiparallel] += 2.0 * spec.coupling_j

    return DenseOperator(support=support, matrix=matrix, kind=OperatorKind.Hermitian)


def bond_term(spec: ChainSpec, left_site: int, support: SiteRange) -> DenseOperator:
    """J(σxσx + σyσy) + Δσzσz on the bond (left_site, left_site + 1), embedded in `support`."""
    if not (support.contains(left_site) and support.contains(left_site + 1)):
        raise ArgumentError(f"Bond ({left_site}, {left_site + 1}) is not inside {support}")
    coefficients = {"x": spec.coupling_j, "y": spec.coupling_j, "z": spec.anisotropy_delta}
    two_site = sum(c * np.kron(PAULI_MATRICES[a], PAULI_MATRICES[a]) for a, c in coefficients.items())
    slot = support.slot(left_site)
    matrix = pad_identity(two_site, slot, support.width - slot - 2)
    return DenseOperator(support=support, matrix=matrix, kind=OperatorKind.Hermitian)


def field_term(spec: ChainSpec, site: int, support: SiteRange) -> DenseOperator:
    """h_site σz_site embedded in `support`."""
    sigma = pauli(site, PauliAxis.Z, support)
    return DenseOperator(support=support, matrix=spec.field(site) * sigma.matrix, kind=OperatorKind.Hermitian)


def embed_operator(op: DenseOperator, target: SiteRange) -> DenseOperator:
    """Tensor identities onto both sides of `op` so it acts on `target`."""
    if not target.covers(op.support):
        raise ArgumentError(f"Support {op.support} is not contained in {target}")
    left = op.support.first - target.first
    right = target.last - op.support.last
    if left == 0 and right == 0:
        return op
    return DenseOperator(support=target, matrix=pad_identity(op.matrix, left, right), kind=op.kind)


def trace_h_squared(spec: ChainSpec) -> float:
    """Closed form of Tr(H²) for the full chain: 2^N (Σ h_i² + (N-1)(2J² + Δ²))."""
    n = spec.n_sites
    field_sum = sum(h * h for h in spec.fields)
    bond_sum = (n - 1) * (2.0 * spec.coupling_j ** 2 + spec.anisotropy_delta ** 2)
    return float(2 ** n * (field_sum + bond_sum))


def _check_within_chain(spec: ChainSpec, support: SiteRange) -> None:
    if support.last > spec.n_sites:
        raise ArgumentError(f"Range {support} exceeds the {spec.n_sites}-site chain")


def neel_bits(n_sites: int) -> str:
    """Bit string of the Néel state |↑↓↑↓...⟩, spin-up first (bit 0 = up)."""
    if n_sites < 1:
        raise ArgumentError(f"n_sites must be positive, got {n_sites}")
    return "".join("0" if site % 2 == 1 else "1" for site in range(1, n_sites + 1))


def product_state(bits: str) -> np.ndarray:
    """Unit basis vector for a bit string, first character = most significant site."""
    if not bits or any(c not in "01" for c in bits):
        raise ArgumentError(f"Product state must be a nonempty 0/1 string, got '{bits}'")
    state = np.zeros(2 ** len(bits), dtype=np.complex128)
    state[int(bits, 2)] = 1.0
    return state
