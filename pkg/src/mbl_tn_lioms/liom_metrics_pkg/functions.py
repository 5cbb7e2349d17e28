"""Commutator figure of merit of approximate LIOMs and related locality measures."""

import logging
from collections import defaultdict
from typing import Optional

import numpy as np

from ..errors import ArgumentError, ContractError
from ..spin_model_pkg import ChainSpec, DenseOperator, PauliAxis, SiteRange, build_hamiltonian
from ..spin_model_pkg.utils import PAULI_MATRICES, site_signs
from ..tensor_network_pkg import WindowLayout
from .structs import MeritReport

logger = logging.getLogger(__name__)

INVOLUTION_TOL = 1e-9
_PROBE_COUNT = 3


def merit(tau: DenseOperator, h: DenseOperator) -> float:
    """Figure of merit Δ(τ) = ‖[τ, h]‖²_F / (2 · 2^n).

    With A = hτ and both operators Hermitian, [τ, h] = A† - A, so a single product
    suffices. The result is non-negative and vanishes when τ commutes with h.

    Args:
        tau: Candidate LIOM with τ² = I
        h: Hamiltonian on the same support

    Returns:
        Δ(τ) in units of energy squared

    Raises:
        ArgumentError: If the supports differ
        ContractError: If τ² deviates from the identity
    """
    _check_same_support(tau, h)
    _check_involution(tau)
    h_tau = h.matrix @ tau.matrix
    commutator = h_tau.conj().T - h_tau
    return float(0.5 * np.sum(np.abs(commutator) ** 2) / tau.dimension)


def merit_commutator(tau: DenseOperator, h: DenseOperator) -> float:
    """Δ(τ) = Tr([τ, h][τ, h]†) / (2 · 2^n), evaluated with the explicit commutator."""
    _check_same_support(tau, h)
    commutator = tau.matrix @ h.matrix - h.matrix @ tau.matrix
    return float(0.5 * np.sum(np.abs(commutator) ** 2) / tau.dimension)


def merit_split(
    tau: DenseOperator,
    spec: ChainSpec,
    layout: WindowLayout,
    site: Optional[int] = None,
    realization: int = 0,
) -> MeritReport:
    """Merit of a tensor-network LIOM split into window and edge parts.

    Args:
        tau: LIOM supported on the layout's window
        spec: Chain the window lives in
        layout: Window geometry
        site: Site τ belongs to (default: the window center)
        realization: Realization index recorded in the report
    """
    if tau.support != layout.window:
        raise ArgumentError(f"LIOM acts on {tau.support}, the window is {layout.window}")
    return merit_split_window(
        tau,
        spec,
        layout.window,
        site=layout.center_site if site is None else site,
        size_param=layout.block_legs,
        realization=realization,
    )


def merit_split_window(
    tau: DenseOperator,
    spec: ChainSpec,
    window: SiteRange,
    site: int,
    size_param: int,
    realization: int = 0,
) -> MeritReport:
    """Merit of a window-supported LIOM against the full chain, computed on the window only.

    The interior part is the merit against the window Hamiltonian H_C. Each bond
    crossing a window edge adds Σ_α c_α² (1 - Tr(σ^α τ σ^α τ) / 2^n) with σ^α on the
    window's edge site; cross terms vanish because the outer spin is traceless.
    Edges that coincide with a chain end contribute nothing.

    Raises:
        ArgumentError: If τ is not supported on `window` or the window leaves the chain
    """
    if tau.support != window:
        raise ArgumentError(f"LIOM acts on {tau.support}, expected {window}")
    if window.last > spec.n_sites:
        raise ArgumentError(f"Window {window} exceeds the {spec.n_sites}-site chain")
    if not window.contains(site):
        raise ArgumentError(f"Site {site} lies outside window {window}")

    interior = merit(tau, build_hamiltonian(spec, window))

    coefficients = {
        PauliAxis.X: spec.coupling_j,
        PauliAxis.Y: spec.coupling_j,
        PauliAxis.Z: spec.anisotropy_delta,
    }
    edges = []
    if window.first > 1:
        edges.append(0)
    if window.last < spec.n_sites:
        edges.append(window.width - 1)

    boundary = 0.0
    for slot in edges:
        for axis, coefficient in coefficients.items():
            if coefficient == 0:
                continue
            conjugated = _conjugate_by_site_pauli(tau.matrix, window.width, slot, axis)
            overlap = np.sum(conjugated * tau.matrix.T).real / tau.dimension
            boundary += coefficient ** 2 * (1.0 - overlap)

    logger.debug("Merit split on %s: interior %.6g, boundary %.6g", window, interior, boundary)
    return MeritReport(
        site=site,
        delta_total=interior + boundary,
        delta_interior=interior,
        delta_boundary=float(boundary),
        disorder_w=spec.disorder_w,
        size_param=size_param,
        realization=realization,
    )


def sigma_merit_analytic(spec: ChainSpec, site: int) -> float:
    """Closed-form Δ(σz_site) against the full chain: 4J² per bond touching the site."""
    spec.full_range.slot(site)  # raises for sites off the chain
    bonds = (site > 1) + (site < spec.n_sites)
    return 4.0 * spec.coupling_j ** 2 * bonds


def commutator_norm(a: DenseOperator, b: DenseOperator) -> float:
    """Normalized Hilbert-Schmidt norm sqrt(Tr(C†C) / 2^n) of C = [a, b]."""
    _check_same_support(a, b)
    commutator = a.matrix @ b.matrix - b.matrix @ a.matrix
    return float(np.sqrt(np.sum(np.abs(commutator) ** 2) / a.dimension))


def locality_profile(tau: DenseOperator, site: int) -> dict[int, float]:
    """Mean ‖[τ, σz_j]‖ over support sites j, grouped by the distance |j - site|.

    σz_j is diagonal, so each commutator is τ scaled elementwise by sign differences.
    """
    support = tau.support
    support.slot(site)  # raises for sites off the support
    grouped: dict[int, list[float]] = defaultdict(list)
    for j in support.sites():
        signs = site_signs(support.width, support.slot(j))
        commutator = tau.matrix * (signs[np.newaxis, :] - signs[:, np.newaxis])
        grouped[abs(j - site)].append(float(np.sqrt(np.sum(np.abs(commutator) ** 2) / tau.dimension)))
    return {distance: float(np.mean(values)) for distance, values in sorted(grouped.items())}


def _conjugate_by_site_pauli(matrix: np.ndarray, width: int, slot: int, axis: PauliAxis) -> np.ndarray:
    """σ^axis_slot · M · σ^axis_slot without building the padded Pauli."""
    left, right = 2 ** slot, 2 ** (width - slot - 1)
    tensor = matrix.reshape(left, 2, right, left, 2, right)
    p = PAULI_MATRICES[axis.value]
    return np.einsum("ps,asbctd,tq->apbcqd", p, tensor, p).reshape(matrix.shape)


def _check_same_support(a: DenseOperator, b: DenseOperator) -> None:
    if a.support != b.support:
        raise ArgumentError(f"Operators act on different supports {a.support} and {b.support}")


def _check_involution(tau: DenseOperator) -> None:
    probes = np.random.default_rng(0).standard_normal((tau.dimension, _PROBE_COUNT))
    deviation = np.max(np.abs(tau.matrix @ (tau.matrix @ probes) - probes))
    if deviation > INVOLUTION_TOL * np.max(np.abs(probes)):
        raise ContractError(f"LIOM does not square to the identity (deviation {deviation:.3e})")
