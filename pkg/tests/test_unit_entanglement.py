import math

import numpy as np
import pytest

from mbl_tn_lioms.entanglement_pkg import (
    DiagonalPath,
    EntanglementTrace,
    TimeGrid,
    diagonal_hamiltonian,
    evolve_two_block,
    neel_state,
    offdiagonal_weight,
    rotate_to_liom_basis,
    tn_entropy_trace,
    von_neumann_entropy,
)
from mbl_tn_lioms.errors import ArgumentError, CapacityError, ContractError
from mbl_tn_lioms.spin_model_pkg import DenseOperator, SiteRange, build_hamiltonian, sample_chain
from mbl_tn_lioms.tensor_network_pkg import WindowLayout, build_network, compose_window_unitary
from tests.strategies import random_unitary


def _network(block_legs: int, seed: int = 5, disorder_w: float = 6.0, realization: int = 0, **couplings):
    spec = sample_chain(seed, realization, 2 * block_legs, disorder_w, **couplings)
    layout = WindowLayout.at(1, block_legs)
    return spec, layout, build_network(spec, layout)


def test_neel_state():
    state = neel_state(4)
    assert state.shape == (16,)
    assert np.flatnonzero(state).tolist() == [5]
    assert np.linalg.norm(state) == pytest.approx(1.0)


def test_time_grid_log_spaced():
    grid = TimeGrid.log_spaced(0.1, 1000.0, 5)
    np.testing.assert_allclose(grid.points, [0.1, 1.0, 10.0, 100.0, 1000.0], rtol=1e-12)
    assert len(grid) == 5
    assert TimeGrid.log_spaced(2.0, 2.0, 1).points == (2.0,)


@pytest.mark.parametrize(
    "points,test_description",
    [
        ((), "Empty grid"),
        ((0.0, 1.0), "Zero time"),
        ((1.0, 1.0), "Repeated time"),
        ((2.0, 1.0), "Decreasing times"),
        ((1.0, math.inf), "Infinite time"),
    ],
)
def test_time_grid_invalid(points, test_description):
    with pytest.raises(ValueError):
        TimeGrid(points=points)


@pytest.mark.parametrize(
    "t_min,t_max,n_points,test_description",
    [
        (0.1, 10.0, 0, "No points"),
        (0.0, 10.0, 5, "Zero t_min"),
        (10.0, 1.0, 5, "t_max below t_min"),
    ],
)
def test_time_grid_log_spaced_invalid(t_min, t_max, n_points, test_description):
    with pytest.raises(ArgumentError):
        TimeGrid.log_spaced(t_min, t_max, n_points)


def test_von_neumann_entropy_examples():
    pure = np.diag([1.0, 0.0])
    assert von_neumann_entropy(pure) == 0.0
    assert math.copysign(1.0, von_neumann_entropy(pure)) == 1.0

    bell = np.array([1, 0, 0, 1]) / math.sqrt(2)
    rho_bell = bell.reshape(2, 2) @ bell.reshape(2, 2).conj().T
    assert von_neumann_entropy(rho_bell) == pytest.approx(math.log(2), abs=1e-12)

    for b in (1, 3, 4):
        mixed = np.eye(2 ** b) / 2 ** b
        assert von_neumann_entropy(mixed) == pytest.approx(b * math.log(2), abs=1e-12)


def test_von_neumann_entropy_rejects_bad_traces():
    with pytest.raises(ContractError):
        von_neumann_entropy(np.eye(2))
    with pytest.raises(ContractError):
        von_neumann_entropy(np.diag([0.5, 0.5 - 1e-6]))


@pytest.mark.parametrize("realization", range(20))
@pytest.mark.parametrize("block_legs", [2, 4])
def test_diagonal_paths_agree(block_legs, realization):
    spec, layout, net = _network(block_legs, realization=realization, anisotropy_delta=0.7)
    dense = diagonal_hamiltonian(net, spec, DiagonalPath.Dense)
    termwise = diagonal_hamiltonian(net, spec, DiagonalPath.TermWise)
    scale = np.max(np.abs(dense))
    np.testing.assert_allclose(termwise, dense, atol=1e-10 * scale)

    rotated = rotate_to_liom_basis(net, build_hamiltonian(spec, layout.window))
    np.testing.assert_allclose(dense, np.diag(rotated.matrix).real, atol=1e-10 * scale)


def test_diagonal_hamiltonian_auto_path():
    spec, layout, net = _network(4)
    dense = diagonal_hamiltonian(net, spec, DiagonalPath.Dense)
    auto_small_limit = diagonal_hamiltonian(net, spec, "auto", dense_limit=7)
    np.testing.assert_allclose(auto_small_limit, dense, atol=1e-10 * np.max(np.abs(dense)))
    with pytest.raises(CapacityError):
        diagonal_hamiltonian(net, spec, DiagonalPath.Dense, dense_limit=7)


def test_diagonal_hamiltonian_sums_to_the_trace():
    spec, layout, net = _network(4, seed=8)
    d = diagonal_hamiltonian(net, spec, DiagonalPath.TermWise)
    assert d.shape == (layout.window.dimension,)
    assert np.sum(d) == pytest.approx(np.trace(build_hamiltonian(spec, layout.window).matrix).real, abs=1e-8)


def test_evolve_two_block_density_matrix():
    spec, layout, net = _network(4)
    d = diagonal_hamiltonian(net, spec)
    rho = evolve_two_block(net, d, 10.0, neel_state(8))
    assert rho.shape == (16, 16)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-12


@pytest.mark.parametrize("block_legs", [2, 4])
def test_evolve_two_block_matches_dense_evolution(block_legs):
    """Dropping the first-layer block unitaries leaves the entropy unchanged."""
    spec, layout, net = _network(block_legs, seed=17, disorder_w=4.0)
    d = diagonal_hamiltonian(net, spec, DiagonalPath.Dense)
    u_c = compose_window_unitary(net).matrix
    psi0 = neel_state(layout.window.width)
    for t in (0.5, 20.0, 1e4):
        psi = u_c @ (np.exp(-1j * t * d) * (u_c.conj().T @ psi0))
        amplitudes = psi.reshape(2 ** block_legs, 2 ** block_legs)
        expected = von_neumann_entropy(amplitudes @ amplitudes.conj().T)
        actual = von_neumann_entropy(evolve_two_block(net, d, t, psi0))
        assert actual == pytest.approx(expected, abs=1e-9)


def test_entropy_is_invariant_under_local_unitaries():
    spec, layout, net = _network(4, seed=21, disorder_w=4.0)
    d = diagonal_hamiltonian(net, spec, DiagonalPath.Dense)
    u_c = compose_window_unitary(net).matrix
    psi = u_c @ (np.exp(-1j * 10.0 * d) * (u_c.conj().T @ neel_state(8)))
    amplitudes = psi.reshape(16, 16)
    before = von_neumann_entropy(amplitudes @ amplitudes.conj().T)

    rotated = random_unitary(16, seed=1) @ amplitudes @ random_unitary(16, seed=2).T
    after = von_neumann_entropy(rotated @ rotated.conj().T)
    assert before > 0
    assert after == pytest.approx(before, abs=1e-12)

    rho = evolve_two_block(net, d, 10.0, neel_state(8))
    w = random_unitary(16, seed=3)
    assert von_neumann_entropy(w @ rho @ w.conj().T) == pytest.approx(von_neumann_entropy(rho), abs=1e-12)


def _mean_offdiagonal_weights(disorder_w: float, realizations: int = 30) -> tuple[float, float]:
    bare, rotated = [], []
    for realization in range(realizations):
        spec, layout, net = _network(4, seed=31, disorder_w=disorder_w, realization=realization)
        h = build_hamiltonian(spec, layout.window)
        bare.append(offdiagonal_weight(h))
        rotated.append(offdiagonal_weight(rotate_to_liom_basis(net, h)))
    return float(np.mean(bare)), float(np.mean(rotated))


def test_network_removes_offdiagonal_weight():
    weak_bare, weak_rotated = _mean_offdiagonal_weights(8.0)
    strong_bare, strong_rotated = _mean_offdiagonal_weights(20.0)
    assert weak_rotated < 0.5 * weak_bare
    assert strong_rotated < 0.5 * strong_bare
    assert strong_rotated / strong_bare < weak_rotated / weak_bare


def test_evolve_two_block_argument_checks():
    spec, layout, net = _network(2)
    d = diagonal_hamiltonian(net, spec)
    with pytest.raises(ArgumentError):
        evolve_two_block(net, d, 1.0, 2 * neel_state(4))
    with pytest.raises(ArgumentError):
        evolve_two_block(net, d, 1.0, neel_state(6))
    with pytest.raises(ArgumentError):
        evolve_two_block(net, d[:-1], 1.0, neel_state(4))


def test_offdiagonal_weight():
    one = SiteRange(first=1, last=1)
    assert offdiagonal_weight(DenseOperator(support=one, matrix=np.diag([1.0, 2.0]))) == 0.0
    assert offdiagonal_weight(DenseOperator(support=one, matrix=[[0.0, 1.0], [1.0, 0.0]])) == pytest.approx(1.0)
    assert offdiagonal_weight(DenseOperator(support=one, matrix=np.zeros((2, 2)))) == 0.0


def test_rotated_hamiltonian_without_hopping_is_diagonal():
    spec, layout, net = _network(4, coupling_j=0.0)
    rotated = rotate_to_liom_basis(net, build_hamiltonian(spec, layout.window))
    assert offdiagonal_weight(rotated) < 1e-12

    with pytest.raises(ArgumentError):
        rotate_to_liom_basis(net, build_hamiltonian(spec, layout.left_block))


@pytest.mark.parametrize("bridge", [True, False])
def test_entropy_stays_zero_without_hopping(bridge):
    spec = sample_chain(2, 0, 8, 8.0, coupling_j=0.0)
    trace = tn_entropy_trace(spec, WindowLayout.at(1, 4), TimeGrid.log_spaced(0.1, 1e6, 8), bridge=bridge)
    assert trace.entropy == pytest.approx([0.0] * 8, abs=1e-10)


def test_entropy_trace_grows_and_stays_bounded():
    spec = sample_chain(4, 1, 8, 5.0)
    grid = TimeGrid.log_spaced(0.1, 1e6, 12)
    trace = tn_entropy_trace(spec, WindowLayout.at(1, 4), grid, seed=4, realization=1)
    assert (trace.seed, trace.realization, trace.block_legs, trace.disorder_w) == (4, 1, 4, 5.0)
    assert len(trace.entropy) == 12
    assert trace.entropy[-1] > trace.entropy[0]
    assert max(trace.entropy) <= 4 * math.log(2) + 1e-9


def test_entropy_trace_paths_agree():
    spec = sample_chain(4, 2, 8, 8.0)
    grid = TimeGrid.log_spaced(1.0, 1e4, 5)
    layout = WindowLayout.at(1, 4)
    dense = tn_entropy_trace(spec, layout, grid, path=DiagonalPath.Dense)
    termwise = tn_entropy_trace(spec, layout, grid, path=DiagonalPath.TermWise)
    assert termwise.entropy == pytest.approx(dense.entropy, abs=1e-8)


def test_entropy_trace_argument_checks():
    spec = sample_chain(4, 2, 8, 8.0)
    grid = TimeGrid.log_spaced(1.0, 10.0, 2)
    with pytest.raises(ArgumentError):
        tn_entropy_trace(spec, WindowLayout.at(1, 4), grid, initial_bits="0101")
    with pytest.raises(ArgumentError):
        tn_entropy_trace(spec, WindowLayout.at(2, 4), grid)


def test_entanglement_trace_contract():
    grid = TimeGrid(points=(1.0, 2.0))
    with pytest.raises(ContractError):
        EntanglementTrace(grid=grid, entropy=(0.1, 2.0), block_legs=2, disorder_w=8.0, seed=0, realization=0)
    with pytest.raises(ValueError):
        EntanglementTrace(grid=grid, entropy=(0.1,), block_legs=2, disorder_w=8.0, seed=0, realization=0)
