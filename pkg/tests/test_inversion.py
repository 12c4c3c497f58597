import numpy as np
import pytest
from hypothesis import given

from conftest import planted, random_system
from lptvinv import (
    LptvSystem,
    NonSquare,
    RelativeDegreeMismatch,
    SignalSpec,
    SingularMarkov,
    UnsupportedStructure,
    invert,
    invert_rd0,
    invert_rdr,
    markov_table,
    oracle_invert_cycled,
    reconstruct,
    simulate_inverse,
    simulate_plant,
    unified_inverse,
)
from lptvinv.randsys import random_lptv


def test_example_4_1_inverse(ex41):
    inv = invert_rd0(ex41)
    assert inv.delay == 0
    expected = {"Gamma": (-0.2, -1 / 30), "Lambda": (0.5, -1 / 6),
                "Omega": (-0.5, 1 / 3), "Pi": (0.5, -1 / 3)}
    for name, values in expected.items():
        seq = getattr(inv, name)
        assert [seq[k].item() for k in range(2)] == pytest.approx(values, abs=1e-12)


def test_example_4_2_first_phase(ex42):
    inv = invert(ex42)
    assert np.max(np.abs(inv.Gamma[0] - [[-0.2, -0.05], [-0.35, 0.275]])) <= 1e-3


def test_static_identity_plant():
    sys = LptvSystem([np.zeros((1, 1))] * 2, [np.zeros((1, 1))] * 2, [np.zeros((1, 1))] * 2,
                     [np.eye(1)] * 2)
    inv = invert_rd0(sys)
    assert all(np.array_equal(p, np.eye(1)) for p in inv.Pi)
    assert all(not g.any() for g in inv.Gamma)


def test_rd0_rejects_delayed_plant(ex43):
    with pytest.raises(RelativeDegreeMismatch):
        invert_rd0(ex43)


def test_example_4_3_inverse(ex43):
    inv = invert_rdr(ex43, 1)
    assert inv.delay == 1
    assert np.max(np.abs(inv.Gamma[0] - [[0, 1], [0, -0.125]])) <= 1e-12
    assert np.max(np.abs(inv.Gamma[1] - [[0.4, 0.16], [-0.2, -0.08]])) <= 1e-12
    assert np.max(np.abs(inv.Gamma[2] - [[0.433, 0.186], [0.167, 0.071]])) <= 1e-3
    assert [p.item() for p in inv.Pi] == pytest.approx([1.25, 1.0, 0.952], abs=1e-3)
    assert inv.Pi[0].item() == pytest.approx(1.25, abs=1e-12)


def test_rdr_rejects_wrong_order(ex43):
    with pytest.raises(RelativeDegreeMismatch):
        invert_rdr(ex43, 2)
    with pytest.raises(ValueError):
        invert_rdr(ex43, 0)


def test_time_invariant_delayed_inverse():
    A = np.array([[0.5, 1.0], [0.0, 0.2]])
    B = np.array([[0.0], [1.0]])
    C = np.array([[1.0, 1.0]])
    inv = invert(LptvSystem([A], [B], [C]))
    CB = C @ B
    assert inv.delay == 1
    assert np.max(np.abs(inv.Gamma[0] - (A - B @ np.linalg.solve(CB, C @ A)))) <= 1e-14
    assert np.max(np.abs(inv.Omega[0] + np.linalg.solve(CB, C @ A))) <= 1e-14
    assert np.max(np.abs(inv.Pi[0] - np.linalg.inv(CB))) <= 1e-14


def test_dispatch_and_unsupported(ex41, ex43):
    assert invert(ex41).delay == 0
    assert invert(ex43).delay == 1
    mixed = LptvSystem([[[0.5]], [[0.5]]], [[[1.0]], [[1.0]]], [[[1.0]], [[1.0]]],
                       [[[1.0]], [[0.0]]])
    with pytest.raises(UnsupportedStructure) as info:
        invert(mixed)
    assert info.value.result.order == 0
    with pytest.raises(NonSquare):
        invert(random_system(0, 2, 2, 1, p=2))


def test_unified_inverse_reports_singular_phase(ex43):
    with pytest.raises(SingularMarkov) as info:
        unified_inverse(ex43, 0)
    assert info.value.phase == 0


def test_order_zero_unified_matches_textbook(ex42):
    inv = invert_rd0(ex42)
    same = unified_inverse(ex42, 0, markov_table(ex42, 0))
    assert inv.max_abs_difference(same) == 0.0
    for k in range(ex42.N):
        Dinv = np.linalg.inv(ex42.D[k])
        assert np.max(np.abs(inv.Gamma[k] - (ex42.A[k] - ex42.B[k] @ Dinv @ ex42.C[k]))) <= 1e-13
        assert np.max(np.abs(inv.Lambda[k] - ex42.B[k] @ Dinv)) <= 1e-13
        assert np.max(np.abs(inv.Omega[k] + Dinv @ ex42.C[k])) <= 1e-13
        assert np.max(np.abs(inv.Pi[k] - Dinv)) <= 1e-13


@pytest.mark.parametrize("name", ["ex41", "ex42", "ex43"])
def test_oracle_agrees_on_examples(name, request):
    sys = request.getfixturevalue(name)
    assert invert(sys).max_abs_difference(oracle_invert_cycled(sys)) <= 1e-12


@given(planted())
def test_oracle_agrees_on_random_plants(case):
    sys, r = case
    inv = invert(sys)
    oracle = oracle_invert_cycled(sys)
    assert oracle.delay == inv.delay == r
    assert inv.max_abs_difference(oracle) <= 1e-12


@given(planted())
def test_left_inverse_is_exact_with_matched_state(case):
    sys, r = case
    rng = np.random.default_rng(sys.N * 7 + sys.n)
    u = rng.uniform(-1, 1, (200 + r, sys.m))
    x0 = rng.standard_normal(sys.n)
    trace = reconstruct(sys, invert(sys), u, x0, x0, 200)
    assert np.max(np.abs(trace.error)) <= 1e-10


def test_left_inverse_with_unstable_inverse():
    # exact in exact arithmetic; rounding grows like rho^(k/N), so keep the horizon short
    sys = random_lptv(np.random.default_rng(8), 2, 2, 1, 0, inverse_radius=(1.2, 3.0))
    u = np.sin(0.3 * np.arange(30))[:, None]
    trace = reconstruct(sys, invert(sys), u, [0.5, -0.5], [0.5, -0.5], 30)
    assert np.max(np.abs(trace.error)) <= 1e-10


@given(planted())
def test_right_inverse_for_feedthrough_plants(case):
    sys, r = case
    if r:
        return
    rng = np.random.default_rng(sys.N * 13 + sys.n)
    y = rng.uniform(-1, 1, (200, sys.p))
    zeta0 = rng.standard_normal(sys.n)
    uhat = simulate_inverse(invert(sys), y, zeta0, 200).uhat
    back = simulate_plant(sys, uhat, zeta0, 200).y
    assert np.max(np.abs(back - y)) <= 1e-10


def test_inverse_of_sine_on_example_4_3(ex43):
    sig = SignalSpec.sine(1.0, 0.075)
    trace = reconstruct(ex43, invert(ex43), sig, [1, 0], [1, 0], 200)
    assert np.max(np.abs(trace.error)) <= 1e-10
