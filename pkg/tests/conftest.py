import cmath
import math
import sys

import numpy as np
import pytest

from spinkit.hadamard import standard
from spinkit.numbers import make_context


def complex_matrix(M, ctx):
    """Plain complex128 copy of a SpinMatrix, the oracle for most checks."""
    out = np.empty((M.n, M.n), dtype=complex)
    for (i, j), v in np.ndenumerate(M.entries):
        out[i, j] = ctx.evaluate(v)
    return out


def oracle_components(M):
    """Components of the Y-vector graph of a complex matrix, by breadth-first search.

    Returns a labelling of the n^2 pairs by the smallest member of each class.
    """
    n = M.shape[0]
    Y = (M[:, :, None] / M[:, None, :]).transpose(1, 2, 0).reshape(n * n, n)
    adj = np.abs(Y @ Y.conj().T) > 1e-7
    label = np.full(n * n, -1)
    for s in range(n * n):
        if label[s] >= 0:
            continue
        frontier = [s]
        label[s] = s
        while frontier:
            nxt = np.flatnonzero(adj[frontier].any(axis=0) & (label < 0))
            label[nxt] = s
            frontier = list(nxt)
    return label


def z8(a):
    return cmath.exp(1j * math.pi * a / 4)


@pytest.fixture(scope="session")
def H4():
    return standard(4)


@pytest.fixture(scope="session")
def H8():
    return standard(8)


@pytest.fixture(scope="session")
def ctx4():
    return make_context(4)


@pytest.fixture(scope="session")
def ctx8():
    return make_context(8)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
