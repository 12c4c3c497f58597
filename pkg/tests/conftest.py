import numpy as np
import pytest
from hypothesis import settings, strategies as st

from lptvinv import LptvSystem, load_example
from lptvinv.randsys import random_corpus, random_lptv

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex41():
    return load_example("example_4_1")


@pytest.fixture(scope="session")
def ex42():
    return load_example("example_4_2")


@pytest.fixture(scope="session")
def ex43():
    return load_example("example_4_3")


@pytest.fixture(scope="session")
def corpus():
    return random_corpus(seed=0, count=50)


def random_system(seed, N, n, m, p=None, scale=0.9, with_d=True):
    """Plant with per-phase spectral norm of A at most ``scale``."""
    rng = np.random.default_rng(seed)
    p = m if p is None else p
    A = []
    for _ in range(N):
        a = rng.standard_normal((n, n))
        A.append(a * scale / max(np.linalg.norm(a, 2), 1e-12))
    B = [rng.standard_normal((n, m)) for _ in range(N)]
    C = [rng.standard_normal((p, n)) for _ in range(N)]
    D = [rng.standard_normal((p, m)) for _ in range(N)] if with_d else None
    return LptvSystem(A, B, C, D)


@st.composite
def plants(draw, max_N=5, max_n=4, max_m=2):
    seed = draw(st.integers(0, 2**32 - 1))
    N = draw(st.integers(1, max_N))
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    return random_system(seed, N, n, m)


@st.composite
def planted(draw, radius=(1e-3, 0.9)):
    """(system, r) with uniform relative degree r drawn from 0..2."""
    seed = draw(st.integers(0, 2**32 - 1))
    r = draw(st.integers(0, 2))
    N = draw(st.integers(1, 5))
    m = 1 if r == 2 else draw(st.integers(1, 2))
    n = draw(st.integers(r * m + 1 if r else 1, 4))
    rng = np.random.default_rng(seed)
    return random_lptv(rng, N, n, m, r, inverse_radius=radius), r
