"""Shared strategies and the acceptance summary printed after the run."""

import sys
from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from fracperim.set_model import IntervalUnion

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE: dict[int, str] = {}


@st.composite
def interval_unions(draw, lo=-5.0, hi=5.0, max_pieces=4, rays=False, min_gap=1e-3):
    """Disjoint interval unions whose endpoints in [lo, hi] are at least ``min_gap`` apart."""
    k = draw(st.integers(0, max_pieces))
    pts = draw(
        st.lists(st.floats(lo, hi, allow_nan=False), min_size=2 * k, max_size=2 * k, unique=True).filter(
            lambda p: len(p) < 2 or float(np.min(np.diff(sorted(p)))) > min_gap
        )
    )
    pts = sorted(pts)
    pieces = [(pts[2 * i], pts[2 * i + 1]) for i in range(k)]
    left = right = None
    if rays:
        if draw(st.booleans()):
            left = draw(st.floats(lo - 5, lo))
        if draw(st.booleans()):
            right = draw(st.floats(hi, hi + 5))
    return IntervalUnion(tuple(pieces), left_ray=left, right_ray=right)


def separated_pair(rng: np.random.Generator, gap_min=0.05):
    """Two disjoint bounded intervals at distance >= gap_min."""
    a = np.sort(rng.uniform(-2, 2, size=2))
    width = rng.uniform(0.1, 2.0)
    gap = rng.uniform(gap_min, 2.0)
    return (float(a[0]), float(a[1])), (float(a[1] + gap), float(a[1] + gap + width))


def pytest_terminal_summary(terminalreporter):
    # test modules import this file by name, which under importlib mode is a
    # separate module object from the one pytest loaded
    lines = getattr(sys.modules.get("conftest"), "ACCEPTANCE", None) or ACCEPTANCE
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
