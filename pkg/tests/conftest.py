from fractions import Fraction

import pytest

from k3torus.wps import default_catalog


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture
def x30(catalog):
    return catalog["X30"]


@pytest.fixture
def x36(catalog):
    return catalog["X36"]


@pytest.fixture
def x50(catalog):
    return catalog["X50"]


def dense_pair(basis, gram, u, v):
    """Reference pairing: explicit double loop over dense coordinates."""
    cu = [Fraction(u.get(b, 0)) for b in basis]
    cv = [Fraction(v.get(b, 0)) for b in basis]
    total = Fraction(0)
    for i in range(len(basis)):
        for j in range(len(basis)):
            total += cu[i] * Fraction(gram[i][j]) * cv[j]
    return total


_START = {}


def pytest_sessionstart(session):
    import time

    _START["t"] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    import time

    dt = time.perf_counter() - _START["t"]
    verdict = "PASS" if dt < 60 else "FAIL"
    terminalreporter.write_line(f"criterion 9 runtime: {verdict} - full suite {dt:.1f}s (budget 60s)")
