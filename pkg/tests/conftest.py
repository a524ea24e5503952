import numpy as np
from hypothesis import strategies as st

from pbrcheck.qlinalg import Ket

_coord = st.floats(min_value=-1, max_value=1, allow_nan=False, allow_infinity=False)


@st.composite
def normalized_kets(draw, dim=2):
    re = draw(st.lists(_coord, min_size=dim, max_size=dim))
    im = draw(st.lists(_coord, min_size=dim, max_size=dim))
    amps = np.array(re) + 1j * np.array(im)
    norm = np.linalg.norm(amps)
    if norm < 1e-3:
        amps = np.eye(dim)[0].astype(complex)
        norm = 1.0
    return Ket(amps / norm)


phases = st.floats(min_value=0, max_value=2 * np.pi, allow_nan=False)


import pytest

_acceptance_key = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, text, ok)`` then assert."""
    lines = request.config.stash.setdefault(_acceptance_key, [])

    def record(number, text, ok):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")
        assert ok, text

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_acceptance_key, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
