import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinitc import (CouplingKind, DegenerateGeometryError, InvalidNetworkError, SpinNetwork,
                     build_chain, build_geometric_network, single_excitation_hamiltonian)


def test_chain_couplings():
    net = build_chain(3, "xx", 1.0)
    assert np.array_equal(net.couplings, [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert net.positions is None
    assert np.array_equal(build_chain(2, CouplingKind.HEISENBERG).couplings, [[0, 1], [1, 0]])


def test_chain_n7_is_tridiagonal():
    J = build_chain(7, "xx").couplings
    assert J.shape == (7, 7)
    assert np.array_equal(J, np.diag(np.ones(6), 1) + np.diag(np.ones(6), -1))


@pytest.mark.parametrize("n, j", [(1, 1.0), (0, 1.0), (3, 0.0), (3, -1.0)])
def test_chain_rejects_bad_input(n, j):
    with pytest.raises(InvalidNetworkError):
        build_chain(n, "xx", j)


def test_unknown_kind():
    with pytest.raises(InvalidNetworkError):
        build_chain(3, "xxz")


@pytest.mark.parametrize("r, expected", [(1.0, 1.0), (2.0, 0.125)])
def test_inverse_cube(r, expected):
    net = build_geometric_network([[0, 0], [r, 0]])
    assert net.couplings[0, 1] == pytest.approx(expected, rel=1e-15)
    assert net.positions.shape == (2, 2)


def test_random_square_dense(rng):
    pts = rng.uniform(size=(10, 2))
    net = build_geometric_network(pts, "xx", 3)
    J = net.couplings
    off = ~np.eye(10, dtype=bool)
    assert np.all(J[off] > 0)
    assert np.array_equal(J, J.T)
    r = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
    assert np.allclose(J[off], r[off] ** -3, rtol=1e-14)


def test_coincident_points():
    with pytest.raises(DegenerateGeometryError):
        build_geometric_network([[0, 0], [1, 1], [0, 0]])


def test_network_validation():
    with pytest.raises(InvalidNetworkError, match=r"\(0, 1\)"):
        SpinNetwork("xx", [[0, 1], [2, 0]])
    with pytest.raises(InvalidNetworkError):
        SpinNetwork("xx", [[1, 0], [0, 0]])
    with pytest.raises(InvalidNetworkError):
        SpinNetwork("xx", [[0, -1], [-1, 0]])
    with pytest.raises(InvalidNetworkError):
        SpinNetwork("xx", np.zeros((2, 2)), positions=[[0, 0]])


def test_hamiltonians_n3():
    assert np.array_equal(single_excitation_hamiltonian(build_chain(3, "xx")),
                          [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    H = single_excitation_hamiltonian(build_chain(3, "heisenberg"))
    assert np.array_equal(H, [[-1, 1, 0], [1, -2, 1], [0, 1, -1]])
    # characteristic polynomial by hand: -l (l + 1) (l + 3)
    assert np.allclose(np.linalg.eigvalsh(H), [-3, -1, 0], atol=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 12), st.sampled_from(["xx", "heisenberg"]), st.integers(0, 10_000))
def test_hamiltonian_structure(n, kind, seed):
    pts = np.random.default_rng(seed).uniform(size=(n, 2))
    net = build_geometric_network(pts, kind)
    H = single_excitation_hamiltonian(net)
    assert np.array_equal(H, H.T)
    off = ~np.eye(n, dtype=bool)
    assert np.array_equal(H[off] == 0, net.couplings[off] == 0)


@pytest.mark.parametrize("n", [2, 5, 8])
@pytest.mark.parametrize("kind", ["xx", "heisenberg"])
def test_uniform_chain_centrosymmetric(n, kind):
    H = single_excitation_hamiltonian(build_chain(n, kind))
    assert np.array_equal(H, H[::-1, ::-1])
