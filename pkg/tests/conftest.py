import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("GRADEXT_HYPOTHESIS", "default"))

PRIMES = (2, 3, 5, 7)


@st.composite
def matrices(draw, p=None, max_rows=5, max_cols=5, min_rows=0, min_cols=0):
    p = draw(st.sampled_from(PRIMES)) if p is None else p
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    vals = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(vals, dtype=np.int64).reshape(r, c)


@pytest.fixture(autouse=True)
def _no_disk_cache(monkeypatch):
    monkeypatch.delenv("GRADEXT_CACHE_DIR", raising=False)


def conjugate(m, seed: int):
    """``m`` rewritten in a random basis, with the change-of-basis matrix."""
    from gradext import linalg as la
    from gradext.modules import Module

    rng = np.random.default_rng(seed)
    p = m.p
    while True:
        g = rng.integers(0, p, size=(m.dim, m.dim))
        gi = la.inverse(g, p)
        if gi is not None:
            break
    act = np.stack([(g @ x @ gi) % p for x in m.action])
    # a random basis is not homogeneous, so the result is ungraded
    return Module(m.algebra, act), g
