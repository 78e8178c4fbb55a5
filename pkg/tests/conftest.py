import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from relaxed_minimax import pwl
from relaxed_minimax.harness import generators as gen

settings.register_profile("repo", max_examples=60, deadline=None)
settings.load_profile("repo")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def convex_from_seed(seed: int):
    return gen.random_convex(np.random.default_rng(seed))


def general_from_seed(seed: int):
    return gen.random_general(np.random.default_rng(seed))


def probe_points(*funcs, extra=()):
    """Breakpoints, their near neighbours, midpoints and far tail points."""
    xs = sorted(set(pwl.merged_breakpoints(funcs, extra)))
    pts = set(xs)
    for a, b in zip(xs, xs[1:]):
        pts.update((0.5 * (a + b), a + 1e-7 * (b - a), b - 1e-7 * (b - a)))
    pts.update((xs[0] - 3.0, xs[0] - 1e-7, xs[-1] + 1e-7, xs[-1] + 3.0))
    return sorted(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
