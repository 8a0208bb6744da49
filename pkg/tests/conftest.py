"""Shared fixtures: cached stationary-state solves reused across files.

The three chains below cover the regimes most tests care about (free,
interacting, near-insulating). Solving them once per session keeps the
suite fast without letting tests share mutable state; fixtures hand out
read-only views.

The terminal-summary hook at the bottom condenses the release checks of
``test_acceptance.py`` into one verdict line each, so a full run ends
with a readable scorecard.
"""

import re

import numpy as np
import pytest

from drivenchain.liouville import steady_state
from drivenchain.parameters import ChainParameters


def _frozen(rho):
    rho = np.asarray(rho)
    rho.setflags(write=False)
    return rho


@pytest.fixture(scope="session")
def free_ness():
    """N=5 noninteracting chain, f=0.5, gamma=0.1."""
    params = ChainParameters(n_sites=5, bias=0.5, dephasing=0.1)
    rho, report = steady_state(params)
    return params, _frozen(rho), report


@pytest.fixture(scope="session")
def interacting_ness():
    """N=4 interacting chain, Delta=2, f=0.5, gamma=0.1."""
    params = ChainParameters(n_sites=4, interaction=2.0, bias=0.5, dephasing=0.1)
    rho, report = steady_state(params)
    return params, _frozen(rho), report


@pytest.fixture(scope="session")
def insulating_ness():
    """N=6 strongly interacting chain at maximal bias, Delta=10, f=1, gamma=0."""
    params = ChainParameters(n_sites=6, interaction=10.0, bias=1.0)
    rho, report = steady_state(params, method="direct")
    return params, _frozen(rho), report


@pytest.fixture()
def rng():
    return np.random.default_rng(20260814)


def random_density_matrix(rng, dim: int) -> np.ndarray:
    """Random full-rank density matrix, for oracle checks."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per release criterion that ran."""
    verdicts = {}
    for status, verdict in (
        ("passed", "PASS"),
        ("xpassed", "PASS"),
        ("failed", "FAIL"),
        ("error", "FAIL"),
        ("xfailed", "FAIL"),
    ):
        for report in terminalreporter.stats.get(status, ()):
            match = re.search(
                r"test_acceptance\.py::test_criterion_(\d+)",
                getattr(report, "nodeid", ""),
            )
            if match:
                verdicts[int(match.group(1))] = verdict
    if not verdicts:
        return
    try:
        from test_acceptance import CRITERIA
    except ImportError:
        CRITERIA = {}
    terminalreporter.write_sep("-", "release criteria")
    for number in sorted(verdicts):
        title = CRITERIA.get(number, "")
        terminalreporter.write_line(f"criterion {number:2d}: {verdicts[number]}  {title}")
