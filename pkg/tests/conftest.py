import numpy as np
import pytest

from spinitc import build_chain, eigendecompose, single_excitation_hamiltonian


def chain_spectrum(n, kind="xx"):
    return eigendecompose(single_excitation_hamiltonian(build_chain(n, kind)))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in RESULTS.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  [{detail}]")
