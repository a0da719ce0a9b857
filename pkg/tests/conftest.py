from __future__ import annotations

import time

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from claspkit.core import Chord, ClaspDiagram


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running computation (A_3 presentation)")


# exact arithmetic has heavy-tailed run times; correctness checks need no deadline
settings.register_profile("claspkit", deadline=None)
settings.load_profile("claspkit")

TIMINGS: dict[str, float] = {}


@st.composite
def diagrams(draw, max_chords: int = 6, min_chords: int = 0) -> ClaspDiagram:
    n = draw(st.integers(min_chords, max_chords))
    pts = draw(st.permutations(range(1, 2 * n + 1)))
    heights = draw(st.permutations(range(1, n + 1)))
    signs = draw(st.lists(st.sampled_from((1, -1)), min_size=n, max_size=n))
    chords = []
    for k in range(n):
        a, b = pts[2 * k], pts[2 * k + 1]
        chords.append(Chord(min(a, b), max(a, b), heights[k], signs[k]))
    return ClaspDiagram(tuple(chords))


@pytest.fixture
def rng():
    return np.random.default_rng(20240521)


@pytest.fixture(scope="session")
def a3(tmp_path_factory):
    """The A_3 presentation at the default bounds (computed once per session)."""
    from claspkit.vassiliev import an_presentation

    t0 = time.perf_counter()
    P = an_presentation(3, cache_dir=tmp_path_factory.mktemp("an-cache"))
    TIMINGS["a3"] = time.perf_counter() - t0
    return P


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report(capsys):
    """Print one acceptance line immediately and repeat it in the terminal summary."""

    def emit(line: str) -> None:
        _ACCEPTANCE_LINES.append(line)
        with capsys.disabled():
            print(f"\n{line}")

    return emit


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
