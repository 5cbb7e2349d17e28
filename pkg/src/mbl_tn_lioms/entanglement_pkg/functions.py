"""Entanglement growth after a quench, using the two-block reduction of the network.

In the LIOM basis the rotated window Hamiltonian is replaced by its diagonal, so time
evolution is a phase per basis state. The first-layer block unitaries act on one side
of the cut each and drop out of the entropy, leaving the bridge unitary as the only
source of entanglement.
"""

import logging
import math
from typing import Optional

import numpy as np
import scipy.linalg

from ..errors import ArgumentError, CapacityError, ContractError
from ..settings import DEFAULT_DENSE_LIMIT
from ..spin_model_pkg import (
    ChainSpec,
    DenseOperator,
    OperatorKind,
    PauliAxis,
    build_hamiltonian,
    neel_bits,
    pauli,
    product_state,
)
from ..spin_model_pkg.utils import hermitize
from ..tensor_network_pkg import TwoLayerUnitary, WindowLayout, build_network, compose_window_unitary
from .structs import DiagonalPath, EntanglementTrace, TimeGrid

logger = logging.getLogger(__name__)

EIGENVALUE_FLOOR = 1e-14
TRACE_TOL = 1e-8
NORM_TOL = 1e-10


def neel_state(n_sites: int) -> np.ndarray:
    """|↑↓↑↓...⟩ on `n_sites` sites, spin-up at site 1."""
    return product_state(neel_bits(n_sites))


def rotate_to_liom_basis(
    net: TwoLayerUnitary, h: DenseOperator, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> DenseOperator:
    """U_C† h U_C for an operator on the network's window."""
    if h.support != net.layout.window:
        raise ArgumentError(f"Operator acts on {h.support}, the window is {net.layout.window}")
    window_unitary = compose_window_unitary(net, dense_limit).matrix
    rotated = window_unitary.conj().T @ h.matrix @ window_unitary
    if h.kind is OperatorKind.Hermitian:
        return DenseOperator(support=h.support, matrix=hermitize(rotated), kind=OperatorKind.Hermitian)
    return DenseOperator(support=h.support, matrix=rotated)


def offdiagonal_weight(op: DenseOperator) -> float:
    """Frobenius norm of the off-diagonal part relative to the whole matrix (0 when diagonal)."""
    m = op.matrix
    total = np.sum(np.abs(m) ** 2)
    if total == 0:
        return 0.0
    diagonal = np.sum(np.abs(np.diag(m)) ** 2)
    return float(math.sqrt(max(total - diagonal, 0.0) / total))


def diagonal_hamiltonian(
    net: TwoLayerUnitary,
    spec: ChainSpec,
    path: DiagonalPath = DiagonalPath.Auto,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> np.ndarray:
    """Diagonal of U_C† H_window U_C, indexed like the window basis.

    Args:
        net: Network of the window
        spec: Chain containing the window; only bonds inside the window enter
        path: Dense conjugation, term-wise evaluation, or automatic choice
        dense_limit: Largest window conjugated densely

    Returns:
        Real vector of length 2^(2b)

    Raises:
        CapacityError: If the dense path is requested for a window above `dense_limit`
    """
    layout = net.layout
    if layout.window.last > spec.n_sites:
        raise ArgumentError(f"Window {layout.window} exceeds the {spec.n_sites}-site chain")
    path = DiagonalPath(path)
    if path is DiagonalPath.Auto:
        path = DiagonalPath.Dense if layout.window.width <= dense_limit else DiagonalPath.TermWise
    logger.debug("Diagonal Hamiltonian of window %s via the %s path", layout.window, path.value)

    if path is DiagonalPath.Dense:
        if layout.window.width > dense_limit:
            raise CapacityError(
                f"Dense diagonal of a {layout.window.width}-site window exceeds the dense limit of "
                f"{dense_limit}; use the termwise path or raise --dense-limit"
            )
        window_unitary = compose_window_unitary(net, dense_limit).matrix
        h = build_hamiltonian(spec, layout.window).matrix
        return np.sum(window_unitary.conj() * (h @ window_unitary), axis=0).real
    return _diagonal_termwise(net, spec)


def _diagonal_termwise(net: TwoLayerUnitary, spec: ChainSpec) -> np.ndarray:
    """Term-wise diagonal: block terms through their own block energies, the central bond through U3.

    The window index splits as (a, c | f, g): a and g are the outer quarters, (c, f)
    the bridge sites m. Block terms are diagonal after the first layer, so only the
    central bond mixes the quarters, and it does so at fixed a and g.
    """
    layout = net.layout
    q = 2 ** layout.quarter
    m_dim = net.u_bridge.dimension
    v = net.u_bridge.matrix.reshape(q, q, m_dim)
    weights = np.abs(v) ** 2

    e_left = net.u_left.energies.reshape(q, q)
    e_right = net.u_right.energies.reshape(q, q)
    d_left = np.einsum("cfm,ac->am", weights, e_left)
    d_right = np.einsum("cfm,fg->mg", weights, e_right)

    coefficients = {
        PauliAxis.X: spec.coupling_j,
        PauliAxis.Y: spec.coupling_j,
        PauliAxis.Z: spec.anisotropy_delta,
    }
    d_center = np.zeros((q, q, m_dim))
    v_conj = v.conj()
    u1 = net.u_left.matrix
    u2 = net.u_right.matrix
    for axis, coefficient in coefficients.items():
        if coefficient == 0:
            continue
        left_spin = u1.conj().T @ pauli(layout.left_block.last, axis, layout.left_block).matrix @ u1
        right_spin = u2.conj().T @ pauli(layout.right_block.first, axis, layout.right_block).matrix @ u2
        # blocks of the rotated spins at fixed outer index
        left_at_a = np.einsum("acad->acd", left_spin.reshape(q, q, q, q))
        right_at_g = np.einsum("fgeg->gfe", right_spin.reshape(q, q, q, q))
        for a in range(q):
            shifted = np.einsum("dc,cfm->dfm", left_at_a[a], v)
            d_center[a] += coefficient * np.einsum(
                "dem,gef,dfm->gm", v_conj, right_at_g, shifted, optimize=True
            ).real

    total = d_left[:, :, np.newaxis] + d_right[np.newaxis, :, :] + d_center.transpose(0, 2, 1)
    return total.reshape(-1)


def evolve_two_block(
    net: TwoLayerUnitary,
    d: np.ndarray,
    t: float,
    psi0: np.ndarray,
    bridge: bool = True,
) -> np.ndarray:
    """Reduced density matrix of the left b sites at time t, in the left block eigenbasis.

    Args:
        net: Network of the window
        d: Diagonal Hamiltonian in the LIOM basis
        t: Time
        psi0: Normalized initial state on the window
        bridge: Use the bridge unitary (False replaces it by the identity)

    Returns:
        ρ_A, a 2^b x 2^b density matrix

    Raises:
        ArgumentError: If psi0 is not normalized or the shapes do not match
    """
    amplitudes = _liom_amplitudes(net, psi0, bridge)
    return _reduced_density(net, amplitudes, d, t, bridge)


def _liom_amplitudes(net: TwoLayerUnitary, psi0: np.ndarray, bridge: bool) -> np.ndarray:
    """U_C†|ψ0⟩ shaped (a, m, g), computed block by block."""
    layout = net.layout
    dim = layout.window.dimension
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if psi0.shape != (dim,):
        raise ArgumentError(f"Initial state has shape {psi0.shape}, the window needs ({dim},)")
    norm = np.linalg.norm(psi0)
    if abs(norm - 1.0) > NORM_TOL:
        raise ArgumentError(f"Initial state must be normalized, got norm {norm}")

    block_dim = 2 ** layout.block_legs
    q = 2 ** layout.quarter
    psi = psi0.reshape(block_dim, block_dim)
    psi = net.u_left.matrix.conj().T @ psi @ net.u_right.matrix.conj()
    psi = psi.reshape(q, block_dim, q)
    if bridge:
        psi = np.einsum("mn,amg->ang", net.u_bridge.matrix.conj(), psi)
    return psi


def _reduced_density(
    net: TwoLayerUnitary, amplitudes: np.ndarray, d: np.ndarray, t: float, bridge: bool
) -> np.ndarray:
    block_dim = 2 ** net.layout.block_legs
    if d.shape != (amplitudes.size,):
        raise ArgumentError(f"Diagonal has shape {d.shape}, expected ({amplitudes.size},)")
    evolved = amplitudes * np.exp(-1j * t * d).reshape(amplitudes.shape)
    if bridge:
        evolved = np.einsum("mn,ang->amg", net.u_bridge.matrix, evolved)
    # the outer first-layer unitaries are local to each side of the cut and drop out of ρ_A
    left_right = evolved.reshape(block_dim, block_dim)
    return left_right @ left_right.conj().T


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S = -Tr ρ ln ρ in nats; eigenvalues below 1e-14 contribute nothing.

    Raises:
        ContractError: If Tr ρ deviates from 1 by more than 1e-8
    """
    rho = np.asarray(rho)
    trace = np.trace(rho).real
    if abs(trace - 1.0) > TRACE_TOL:
        raise ContractError(f"Density matrix has trace {trace}, expected 1")
    eigenvalues = scipy.linalg.eigvalsh(hermitize(rho))
    kept = eigenvalues[eigenvalues > EIGENVALUE_FLOOR]
    return max(0.0, float(-np.sum(kept * np.log(kept)))) + 0.0


def tn_entropy_trace(
    spec: ChainSpec,
    layout: WindowLayout,
    grid: TimeGrid,
    initial_bits: Optional[str] = None,
    path: DiagonalPath = DiagonalPath.Auto,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
    bridge: bool = True,
    seed: int = 0,
    realization: int = 0,
) -> EntanglementTrace:
    """Entropy growth across the window's central cut after a product-state quench.

    The network and the diagonal are built once; the time sweep reuses U_C†|ψ0⟩.

    Args:
        spec: Chain containing the window
        layout: Window geometry; the cut lies between its two first-layer blocks
        grid: Evaluation times
        initial_bits: Window product state as a bit string (default: the chain's
            Néel pattern restricted to the window)
        path: Diagonal evaluation path
        dense_limit: Dense capacity limit
        bridge: False replaces the bridge unitary by the identity
        seed: Experiment seed recorded in the trace
        realization: Realization index recorded in the trace
    """
    window = layout.window
    if window.last > spec.n_sites:
        raise ArgumentError(f"Window {window} exceeds the {spec.n_sites}-site chain")
    bits = initial_bits if initial_bits is not None else neel_bits(spec.n_sites)[window.first - 1:window.last]
    if len(bits) != window.width:
        raise ArgumentError(f"Initial state has {len(bits)} sites, the window has {window.width}")

    net = build_network(spec, layout, dense_limit)
    d = diagonal_hamiltonian(net, spec, path, dense_limit)
    amplitudes = _liom_amplitudes(net, product_state(bits), bridge)
    entropy = tuple(
        von_neumann_entropy(_reduced_density(net, amplitudes, d, t, bridge)) for t in grid.points
    )
    return EntanglementTrace(
        grid=grid,
        entropy=entropy,
        block_legs=layout.block_legs,
        disorder_w=spec.disorder_w,
        seed=seed,
        realization=realization,
    )
