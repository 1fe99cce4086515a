import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from spinitc import (build_chain, eigendecompose, probability_time_series, propagator,
                     single_excitation_hamiltonian, transfer_probability)
from spinitc.spectral import time_grid

from conftest import chain_spectrum

HEIS3 = np.array([[-1.0, 1, 0], [1, -2, 1], [0, 1, -1]])


def test_two_by_two():
    s = eigendecompose(np.array([[0.0, 1], [1, 0]]))
    assert np.allclose(s.eigenvalues, [-1, 1])
    v = s.eigenvectors
    assert abs(abs(v[:, 0] @ [1, -1]) / np.sqrt(2) - 1) < 1e-12
    assert abs(abs(v[:, 1] @ [1, 1]) / np.sqrt(2) - 1) < 1e-12


def test_closed_form_eigenvalues():
    # 2 cos(k pi / 4), k = 1..3
    assert np.allclose(chain_spectrum(3).eigenvalues, [-np.sqrt(2), 0, np.sqrt(2)], atol=1e-14)
    assert np.allclose(eigendecompose(HEIS3).eigenvalues, [-3, -1, 0], atol=1e-14)


def test_spectrum_contract(rng):
    A = rng.normal(size=(9, 9))
    H = A + A.T
    s = eigendecompose(H)
    norm = np.linalg.norm(H, 2)
    V, w = s.eigenvectors, s.eigenvalues
    assert np.all(np.diff(w) >= 0)
    assert np.abs(H @ V - V * w).max() <= 1e-10 * norm
    assert np.abs(V.T @ V - np.eye(9)).max() <= 1e-10
    assert np.abs((V * w) @ V.T - H).max() <= 1e-9 * norm


def test_degenerate_groups():
    s = eigendecompose(np.diag([1.0, 1.0, 2.0, 3.0, 3.0 + 1e-13]))
    assert [list(g) for g in s.groups] == [[0, 1], [2], [3, 4]]
    w = s.eigenvalues
    for a, b in zip(s.groups[:-1], s.groups[1:]):
        assert w[b[0]] - w[a[-1]] > s.tol


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigendecompose(np.array([[0.0, 1], [0, 0]]))


def test_propagator_identity_at_zero():
    s = chain_spectrum(5, "heisenberg")
    assert np.allclose(propagator(s, 0.0), np.eye(5), atol=1e-14)


@pytest.mark.parametrize("n, t, i, j", [(2, np.pi / 2, 0, 1), (3, np.pi / np.sqrt(2), 0, 2)])
def test_perfect_transfer_times(n, t, i, j):
    U = propagator(chain_spectrum(n), t)
    assert abs(U[j, i]) == pytest.approx(1.0, abs=1e-12)


def test_propagator_matches_expm(rng):
    H = single_excitation_hamiltonian(build_chain(6, "heisenberg"))
    s = eigendecompose(H)
    for t in rng.uniform(0, 20, size=5):
        assert np.abs(propagator(s, t) - expm(-1j * H * t)).max() < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.floats(0, 100), st.floats(0, 100), st.integers(0, 2**31))
def test_group_property(n, t1, t2, seed):
    A = np.random.default_rng(seed).normal(size=(n, n))
    s = eigendecompose(A + A.T)
    lhs = propagator(s, t1) @ propagator(s, t2)
    assert np.abs(lhs - propagator(s, t1 + t2)).max() <= 1e-9
    U = propagator(s, t1)
    assert np.abs(U.conj().T @ U - np.eye(n)).max() <= 1e-10


def test_transfer_probability_examples():
    s2 = chain_spectrum(2)
    assert transfer_probability(s2, 1, 1, 0.0) == pytest.approx(1.0, abs=1e-15)
    t = np.linspace(0, 5, 11)
    assert np.allclose(transfer_probability(s2, 0, 1, t), np.sin(t) ** 2, atol=1e-14)
    s = eigendecompose(HEIS3)
    p = transfer_probability(s, 0, 1, np.pi / 3)
    oracle = abs(expm(-1j * HEIS3 * np.pi / 3)[1, 0]) ** 2
    assert p == pytest.approx(4 / 9, abs=1e-12)
    assert p == pytest.approx(oracle, abs=1e-12)


def test_transfer_probability_symmetric_and_bounded(rng):
    A = np.abs(rng.normal(size=(7, 7)))
    s = eigendecompose(A + A.T)
    t = rng.uniform(0, 50, size=200)
    for i in range(7):
        for j in range(7):
            p = transfer_probability(s, i, j, t)
            assert np.array_equal(p, transfer_probability(s, j, i, t))
            assert np.all((p >= 0) & (p <= 1 + 1e-12))


def test_index_errors():
    s = chain_spectrum(3)
    with pytest.raises(IndexError):
        transfer_probability(s, 0, 3, 1.0)
    with pytest.raises(ValueError):
        transfer_probability(s, 0, 1, -1.0)


def test_time_series():
    s = chain_spectrum(3)
    t, p = probability_time_series(s, 1, 1, 1.0, 0.5)
    assert np.allclose(t, [0, 0.5, 1.0])
    assert p[0] == 1.0
    with pytest.raises(ValueError):
        probability_time_series(s, 0, 1, 1.0, 0.0)


def test_time_series_hits_sin2_peak():
    dt = np.pi / 2 / 100
    t, p = probability_time_series(chain_spectrum(2), 0, 1, np.pi, dt)
    k = int(np.argmax(p))
    assert t[k] == pytest.approx(np.pi / 2)
    assert p[k] == pytest.approx(1.0, abs=1e-14)


def test_time_series_xx7_respects_cap():
    _, p = probability_time_series(chain_spectrum(7), 0, 3, 50.0, 0.01)
    assert p.max() <= 0.4268 + 1e-6


def test_time_grid_includes_endpoint():
    t = time_grid(1.0, 0.1)
    assert len(t) == 11 and t[-1] == pytest.approx(1.0)
