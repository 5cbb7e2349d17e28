"""Two-layer tensor network of exactly diagonalized block unitaries."""

import logging
from typing import Optional

import numpy as np

from ..errors import ArgumentError, CapacityError
from ..exact_diag_pkg import OrderedUnitary, diagonalize_ordered
from ..settings import DEFAULT_DENSE_LIMIT
from ..spin_model_pkg import (
    ChainSpec,
    DenseOperator,
    OperatorKind,
    PauliAxis,
    SiteRange,
    build_hamiltonian,
    embed_operator,
    pauli,
)
from ..spin_model_pkg.utils import conjugate_diagonal, hermitize, pad_identity, partial_trace_outer, site_signs
from .structs import TwoLayerUnitary, WindowLayout

logger = logging.getLogger(__name__)


def central_layout(n_sites: int, block_legs: int) -> WindowLayout:
    """Window of 2b sites centered in an n-site chain (rounded towards the left end)."""
    width = 2 * block_legs
    if n_sites < width:
        raise ArgumentError(f"A {n_sites}-site chain cannot hold a {width}-site window")
    return WindowLayout.at((n_sites - width) // 2 + 1, block_legs)


def first_layer(
    spec: ChainSpec, layout: WindowLayout, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> tuple[OrderedUnitary, OrderedUnitary, DenseOperator, DenseOperator]:
    """Diagonalize and order the two half-window blocks.

    Args:
        spec: Chain containing the window
        layout: Window geometry
        dense_limit: Largest block diagonalized densely

    Returns:
        (U1, U2, U1† H1 U1, U2† H2 U2) for the left and right blocks

    Raises:
        CapacityError: If a block is longer than `dense_limit` sites
        ArgumentError: If the window does not fit into the chain
    """
    if layout.block_legs > dense_limit:
        raise CapacityError(
            f"Blocks of {layout.block_legs} sites exceed the dense limit of {dense_limit}; raise --dense-limit"
        )
    if layout.window.last > spec.n_sites:
        raise ArgumentError(f"Window {layout.window} exceeds the {spec.n_sites}-site chain")

    unitaries = []
    rotated = []
    for block in (layout.left_block, layout.right_block):
        hamiltonian = build_hamiltonian(spec, block)
        unitary = diagonalize_ordered(hamiltonian)
        u = unitary.matrix
        h_diag = hermitize(u.conj().T @ hamiltonian.matrix @ u)
        unitaries.append(unitary)
        rotated.append(DenseOperator(support=block, matrix=h_diag, kind=OperatorKind.Hermitian))
    return unitaries[0], unitaries[1], rotated[0], rotated[1]


def project_and_expand(diag_op: DenseOperator, keep: SiteRange, target: SiteRange) -> DenseOperator:
    """Normalized partial trace onto `keep`, then identity expansion onto `target`.

    The traced sites are divided out (identity maps to identity) and the result is
    re-symmetrized before embedding.
    """
    support = diag_op.support
    if not support.covers(keep):
        raise ArgumentError(f"Kept range {keep} is not inside the operator support {support}")
    if not target.covers(keep):
        raise ArgumentError(f"Kept range {keep} is not inside the target {target}")
    reduced = partial_trace_outer(
        diag_op.matrix,
        keep.first - support.first,
        keep.width,
        support.last - keep.last,
    )
    kind = OperatorKind.Hermitian if diag_op.kind is OperatorKind.Hermitian else OperatorKind.General
    if kind is OperatorKind.Hermitian:
        reduced = hermitize(reduced)
    return embed_operator(DenseOperator(support=keep, matrix=reduced, kind=kind), target)


def bridge_hamiltonian(
    spec: ChainSpec,
    layout: WindowLayout,
    u_left: OrderedUnitary,
    u_right: OrderedUnitary,
    h1_diag: DenseOperator,
    h2_diag: DenseOperator,
) -> DenseOperator:
    """Second-layer Hamiltonian H3 = H01 + H12 + H02 on the middle b sites.

    H01 and H02 are the rotated block Hamiltonians projected onto the halves of the
    blocks adjacent to the cut. H12 is the central bond written with the rotated
    boundary spins U1† σ^α U1 and U2† σ^α U2, each projected the same way.
    """
    middle = layout.middle
    h01 = project_and_expand(h1_diag, layout.left_keep, middle)
    h02 = project_and_expand(h2_diag, layout.right_keep, middle)

    left_edge = layout.left_block.last
    right_edge = layout.right_block.first
    coefficients = {
        PauliAxis.X: spec.coupling_j,
        PauliAxis.Y: spec.coupling_j,
        PauliAxis.Z: spec.anisotropy_delta,
    }
    h12 = np.zeros((middle.dimension, middle.dimension), dtype=np.complex128)
    for axis, coefficient in coefficients.items():
        if coefficient == 0:
            continue
        left_spin = _rotated_spin(u_left, left_edge, axis, layout.left_keep)
        right_spin = _rotated_spin(u_right, right_edge, axis, layout.right_keep)
        h12 += coefficient * np.kron(left_spin, right_spin)

    h3 = hermitize(h01.matrix + h12 + h02.matrix)
    return DenseOperator(support=middle, matrix=h3, kind=OperatorKind.Hermitian)


def _rotated_spin(unitary: OrderedUnitary, site: int, axis: PauliAxis, keep: SiteRange) -> np.ndarray:
    """U† σ^axis_site U projected onto `keep` (normalized partial trace)."""
    block = unitary.source_support
    u = unitary.matrix
    sigma = pauli(site, axis, block).matrix
    rotated = DenseOperator(support=block, matrix=hermitize(u.conj().T @ sigma @ u), kind=OperatorKind.Hermitian)
    return project_and_expand(rotated, keep, keep).matrix


def second_layer(h3: DenseOperator) -> OrderedUnitary:
    """Ordered eigenbasis of the bridge Hamiltonian."""
    return diagonalize_ordered(h3)


def build_network(spec: ChainSpec, layout: WindowLayout, dense_limit: int = DEFAULT_DENSE_LIMIT) -> TwoLayerUnitary:
    """Run both layers on one window."""
    u_left, u_right, h1_diag, h2_diag = first_layer(spec, layout, dense_limit)
    h3 = bridge_hamiltonian(spec, layout, u_left, u_right, h1_diag, h2_diag)
    return TwoLayerUnitary(layout=layout, u_left=u_left, u_right=u_right, u_bridge=second_layer(h3))


def compose_window_unitary(net: TwoLayerUnitary, dense_limit: int = DEFAULT_DENSE_LIMIT) -> DenseOperator:
    """U_C = (U1 ⊗ U2) · (I ⊗ U3 ⊗ I) on the 2b-site window.

    Columns of U_C are the LIOM basis states written in the physical basis.
    """
    layout = net.layout
    if layout.window.width > dense_limit:
        raise CapacityError(
            f"A dense {layout.window.width}-site window unitary exceeds the dense limit of {dense_limit} sites"
        )
    first_layer_matrix = np.kron(net.u_left.matrix, net.u_right.matrix)
    bridge = pad_identity(net.u_bridge.matrix, layout.quarter, layout.quarter)
    return DenseOperator(support=layout.window, matrix=first_layer_matrix @ bridge, kind=OperatorKind.Unitary)


def tn_liom(
    spec: ChainSpec,
    layout: WindowLayout,
    site: int,
    net: Optional[TwoLayerUnitary] = None,
    dense_limit: int = DEFAULT_DENSE_LIMIT,
) -> DenseOperator:
    """Approximate LIOM τ = U_C σz_site U_C† on the window.

    Args:
        spec: Chain containing the window
        layout: Window geometry
        site: Chain site inside the middle half of the window
        net: Previously built network of this window, if available
        dense_limit: Largest window handled densely

    Raises:
        ArgumentError: If `site` is outside the middle half of the window
    """
    if not layout.middle.contains(site):
        raise ArgumentError(f"Site {site} is outside the middle half {layout.middle} of window {layout.window}")
    if net is None:
        net = build_network(spec, layout, dense_limit)
    window_unitary = compose_window_unitary(net, dense_limit)
    signs = site_signs(layout.window.width, layout.window.slot(site))
    tau = conjugate_diagonal(window_unitary.matrix, signs)
    return DenseOperator(support=layout.window, matrix=tau, kind=OperatorKind.Hermitian)


def liom_set(
    spec: ChainSpec, layout: WindowLayout, dense_limit: int = DEFAULT_DENSE_LIMIT
) -> dict[int, DenseOperator]:
    """All LIOMs a window defines, keyed by site; they share one conjugating unitary."""
    net = build_network(spec, layout, dense_limit)
    window_unitary = compose_window_unitary(net, dense_limit).matrix
    width = layout.window.width
    return {
        site: DenseOperator(
            support=layout.window,
            matrix=conjugate_diagonal(window_unitary, site_signs(width, layout.window.slot(site))),
            kind=OperatorKind.Hermitian,
        )
        for site in layout.middle.sites()
    }
