import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_system
from lptvinv import DimensionError, LptvSystem, PhaseSequence, monodromy, transition_product


def test_phase_sequence_wraps_time():
    seq = PhaseSequence([[[1.0]], [[2.0]], [[3.0]]])
    assert seq.period == 3
    assert seq.shape == (1, 1)
    for k in range(-4, 10):
        assert seq[k] is seq.entries[k % 3]


def test_phase_sequence_promotes_scalars_and_freezes():
    seq = PhaseSequence([0.5, -1])
    assert seq[0].shape == (1, 1)
    with pytest.raises(ValueError):
        seq[0][0, 0] = 3.0


def test_phase_sequence_rejects_mixed_shapes():
    with pytest.raises(DimensionError):
        PhaseSequence([np.eye(2), np.eye(3)])


def test_system_defaults_d_to_zero():
    sys = LptvSystem([np.eye(2)] * 3, [np.ones((2, 1))] * 3, [np.ones((1, 2))] * 3)
    assert (sys.N, sys.dims) == (3, (2, 1, 1))
    assert all(np.array_equal(d, np.zeros((1, 1))) for d in sys.D)


@pytest.mark.parametrize("bad", ["B", "C", "D", "period"])
def test_system_validates_dimensions(bad):
    A = [np.eye(2)] * 2
    B = [np.ones((2, 1))] * 2
    C = [np.ones((1, 2))] * 2
    D = [np.ones((1, 1))] * 2
    if bad == "B":
        B = [np.ones((3, 1))] * 2
    elif bad == "C":
        C = [np.ones((1, 3))] * 2
    elif bad == "D":
        D = [np.ones((2, 1))] * 2
    else:
        D = [np.ones((1, 1))] * 3
    with pytest.raises(DimensionError):
        LptvSystem(A, B, C, D)


def test_transition_identity_on_equal_times(ex43):
    assert np.array_equal(transition_product(ex43, 5, 5), np.eye(2))


def test_transition_examples(ex41, ex43):
    assert transition_product(ex41, 2, 0).item() == pytest.approx(-0.06, abs=1e-15)
    assert np.array_equal(transition_product(ex43, 1, 0), ex43.A[0])


def test_transition_rejects_bad_order(ex41):
    with pytest.raises(ValueError):
        transition_product(ex41, 0, 1)
    with pytest.raises(ValueError):
        transition_product(ex41, 2, -1)


@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 4),
       st.integers(0, 12), st.integers(0, 6), st.integers(0, 6))
def test_transition_semigroup_and_periodicity(seed, N, n, i, a, b):
    sys = random_system(seed, N, n, 1)
    l, j = i + a, i + a + b
    lhs = transition_product(sys, j, i)
    rhs = transition_product(sys, j, l) @ transition_product(sys, l, i)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12
    shifted = transition_product(sys, j + N, i + N)
    assert np.max(np.abs(shifted - lhs)) <= 1e-12


def test_monodromy_examples():
    assert monodromy([[[-0.2]], [[-1 / 30]]]).item() == pytest.approx(1 / 150, abs=1e-15)
    assert np.array_equal(monodromy([np.array([[0.7]])]), np.array([[0.7]]))
    assert np.array_equal(monodromy([np.eye(3)] * 4), np.eye(3))


def test_monodromy_matches_multi_dot():
    rng = np.random.default_rng(3)
    mats = [rng.standard_normal((3, 3)) for _ in range(4)]
    expected = np.linalg.multi_dot(mats[::-1])
    assert np.max(np.abs(monodromy(mats) - expected)) <= 1e-12


def test_monodromy_equals_full_period_transition(ex43):
    assert np.max(np.abs(monodromy(ex43.A) - transition_product(ex43, 3, 0))) <= 1e-15


def test_monodromy_rejects_non_square():
    with pytest.raises(DimensionError):
        monodromy([np.ones((2, 3))])
