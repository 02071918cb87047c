import math

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from vacfield.fock_algebra import Kind, LadderOp, OperatorPoly

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

MODES = ("m0", "m1", "m2", "m3")

ladder_ops = st.builds(LadderOp, st.sampled_from(MODES), st.sampled_from(list(Kind)))
coeffs = st.builds(
    complex,
    st.floats(-2, 2, allow_nan=False).map(lambda x: round(x, 3)),
    st.floats(-2, 2, allow_nan=False).map(lambda x: round(x, 3)),
)
degrees = st.tuples(st.integers(0, 2), st.integers(0, 2))


def polys(max_len=6, max_terms=4, ops=ladder_ops):
    term = st.tuples(st.tuples(degrees, st.lists(ops, max_size=max_len).map(tuple)), coeffs)
    return st.lists(term, min_size=0, max_size=max_terms).map(OperatorPoly)


def words(max_len=6, ops=ladder_ops):
    return st.lists(ops, max_size=max_len).map(tuple)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def balanced_amplitudes():
    return 1j / math.sqrt(2), 1 / math.sqrt(2)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line per acceptance criterion and assert on it."""
    def record(number: int, title: str, passed: bool, detail: str) -> None:
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
