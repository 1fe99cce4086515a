import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from spinitc import (ControlSequence, OptimizerConfig, build_chain, control_hamiltonian,
                     controlled_transfer_probability, effective_hamiltonian, effective_itc,
                     itc_matrix, optimize_switching, piecewise_evolution,
                     single_excitation_hamiltonian)
from spinitc.control import roundtrip_error
from spinitc.spectral import time_grid

H0 = single_excitation_hamiltonian(build_chain(7, "xx"))
H1 = control_hamiltonian(7, 0, 2.0)


def test_control_hamiltonian():
    assert np.array_equal(control_hamiltonian(3, 0, 2.0), np.diag([2.0, 0, 0]))
    assert np.array_equal(H1, np.diag([2.0, 0, 0, 0, 0, 0, 0]))
    assert not control_hamiltonian(4, 2, 0.0).any()
    with pytest.raises(IndexError):
        control_hamiltonian(3, 3)


def test_sequence_validation():
    with pytest.raises(ValueError):
        ControlSequence(0, 2.0, (1.0, 1.0), 3.0)
    with pytest.raises(ValueError):
        ControlSequence(0, 2.0, (1.0, 2.0), 2.0)
    with pytest.raises(ValueError):
        ControlSequence(0, 2.0, (0.0,), 2.0)
    seq = ControlSequence(0, 2.0, (), 0.0)
    assert len(seq.durations) == 1


def test_sequence_json_roundtrip():
    seq = ControlSequence(0, 2.0, (0.5, 1.25), 2.0, 0.3, seed=4)
    assert ControlSequence.from_dict(json.loads(json.dumps(seq.to_dict()))) == seq


def test_free_evolution():
    seq = ControlSequence(0, 2.0, (), 3.7)
    assert np.abs(piecewise_evolution(H0, H1, seq) - expm(-1j * H0 * 3.7)).max() < 1e-10


def test_two_segments():
    seq = ControlSequence(0, 2.0, (1.3,), 4.0)
    ref = expm(-1j * (H0 + H1) * 2.7) @ expm(-1j * H0 * 1.3)
    assert np.abs(piecewise_evolution(H0, H1, seq) - ref).max() < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.01, 5.0), min_size=1, max_size=9))
def test_zero_control_is_free(durs):
    seq = ControlSequence.from_durations(durs, 0, 0.0)
    U = piecewise_evolution(H0, np.zeros((7, 7)), seq)
    assert np.abs(U - expm(-1j * H0 * seq.final_time)).max() <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(0.01, 5.0), min_size=1, max_size=9), st.floats(0.05, 0.95), st.integers(0, 8))
def test_split_segment_invariance(durs, frac, which):
    which %= len(durs)
    seq = ControlSequence.from_durations(durs, 0, 2.0)
    U = piecewise_evolution(H0, H1, seq)
    assert np.abs(U.conj().T @ U - np.eye(7)).max() <= 1e-9
    # splitting segment k in two same-type pieces needs a zero-length opposite segment between them
    d = list(durs)
    a = d[which] * frac
    b = d[which] - a
    from spinitc.control import _Segments
    segs = _Segments(H0, H1)
    parts = d[:which] + [a, 0.0, b] + d[which + 1:]
    assert np.abs(segs.unitary(parts) - U).max() <= 1e-10


def test_controlled_probability_trivial():
    seq = ControlSequence(0, 2.0, (), 0.0)
    assert controlled_transfer_probability(H0, H1, seq, 2, 2) == pytest.approx(1.0)


def test_free_cap_holds():
    for T in (1.0, 7.3, 25.0, 120.0):
        seq = ControlSequence(0, 2.0, (), T)
        assert controlled_transfer_probability(H0, H1, seq, 0, 3) <= 0.4268 + 1e-6


def test_optimizer_same_node():
    seq = optimize_switching(H0, H1, 2, 2, segments=3, horizon=5.0, cfg=OptimizerConfig(restarts=2))
    assert seq.achieved_p >= 1 - 1e-6


def test_optimizer_zero_segments_matches_scan():
    seq = optimize_switching(H0, H1, 0, 3, segments=0, horizon=20.0)
    assert seq.switch_times == ()
    t = time_grid(20.0, 0.01 / np.abs(np.linalg.eigvalsh(H0)).max())
    best = max(abs(expm(-1j * H0 * tk)[3, 0]) ** 2 for tk in t[::50])
    assert seq.achieved_p >= best - 1e-12
    assert seq.achieved_p <= 0.4268 + 1e-6


def test_optimizer_deterministic_and_consistent():
    cfg = OptimizerConfig(restarts=3, seed=11, maxfev=3000)
    a = optimize_switching(H0, H1, 0, 3, segments=6, horizon=15.0, cfg=cfg)
    b = optimize_switching(H0, H1, 0, 3, segments=6, horizon=15.0, cfg=cfg)
    assert a == b
    assert a.site == 0 and a.strength == 2.0 and a.seed == 11
    assert a.final_time <= 15.0 + 1e-9
    direct = controlled_transfer_probability(H0, H1, a, 0, 3)
    assert a.achieved_p <= direct + 1e-12
    assert a.achieved_p > 0.4268


def test_effective_identity():
    he = effective_hamiltonian(np.eye(4), 1.0)
    assert np.abs(he.matrix).max() < 1e-15


def test_effective_recovers_generator():
    t = 0.9 * np.pi / np.linalg.norm(H0, 2)
    he = effective_hamiltonian(expm(-1j * H0 * t), t)
    assert np.abs(he.matrix - H0).max() < 1e-8
    assert not he.near_branch_cut


def test_effective_rejects_non_unitary():
    with pytest.raises(ValueError):
        effective_hamiltonian(2 * np.eye(3), 1.0)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(0.05, 6.0), min_size=2, max_size=10))
def test_effective_roundtrip(durs):
    seq = ControlSequence.from_durations(durs, 0, 2.0)
    U = piecewise_evolution(H0, H1, seq)
    he = effective_hamiltonian(U, seq.final_time)
    assert np.abs(he.matrix - he.matrix.conj().T).max() <= 1e-10
    assert roundtrip_error(he, U) <= 1e-9


def test_effective_itc_free():
    P = effective_itc(H0).p_max
    assert np.abs(P - itc_matrix(build_chain(7, "xx")).p_max).max() <= 1e-9


def test_effective_itc_zero():
    P = effective_itc(np.zeros((5, 5))).p_max
    assert np.array_equal(P, np.eye(5))
