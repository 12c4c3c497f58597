import numpy as np
import pytest
from hypothesis import given

from conftest import planted, random_system
from lptvinv import (
    FactorizationMismatch,
    LptvSystem,
    NonSquare,
    RelativeDegreeKind,
    build_cycled,
    detect_relative_degree,
    markov_factorization,
    markov_table,
    periodic_markov,
)
from lptvinv.markov import is_nonsingular, is_zero
from lptvinv.randsys import random_lptv


def test_markov_examples(ex43):
    assert periodic_markov(ex43, 0, 1).item() == pytest.approx(0.8, abs=1e-12)
    assert periodic_markov(ex43, 2, 1).item() == pytest.approx(1.05, abs=1e-12)
    assert np.array_equal(periodic_markov(ex43, 1, 0), ex43.D[1])
    assert periodic_markov(ex43, 4, 1).item() == periodic_markov(ex43, 1, 1).item()


def test_zero_input_matrix_gives_zero_markov():
    sys = LptvSystem([np.eye(2)] * 2, [np.zeros((2, 1))] * 2, [np.ones((1, 2))] * 2)
    for j in range(1, 5):
        assert not periodic_markov(sys, 0, j).any()


def test_markov_table_matches_dense_cycled(ex42):
    cyc = build_cycled(ex42)
    A, B, C, _ = cyc.dense()
    dense = C @ np.linalg.matrix_power(A, 2) @ B
    table = markov_table(ex42, 3)
    for k in range(ex42.N):
        row = (k + 3) % ex42.N
        p, m = ex42.p, ex42.m
        block = dense[row * p:(row + 1) * p, k * m:(k + 1) * m]
        assert np.max(np.abs(block - table[k])) <= 1e-14


def test_detect_examples(ex41, ex42, ex43):
    assert detect_relative_degree(ex41).kind is RelativeDegreeKind.ZERO
    assert detect_relative_degree(ex42).kind is RelativeDegreeKind.ZERO
    result = detect_relative_degree(ex43)
    assert result.kind is RelativeDegreeKind.UNIFORM and result.order == 1


def test_detect_mixed_feedthrough():
    sys = LptvSystem([[[0.5]], [[0.5]]], [[[1.0]], [[1.0]]], [[[1.0]], [[1.0]]],
                     [[[1.0]], [[0.0]]])
    result = detect_relative_degree(sys)
    assert result.kind is RelativeDegreeKind.MIXED
    assert result.order == 0
    assert result.witness == {"nonsingular": (0,), "zero": (1,)}
    assert not result.supported


def test_detect_mixed_at_first_order():
    sys = LptvSystem([[[0.5]], [[0.5]]], [[[1.0]], [[0.0]]], [[[1.0]], [[1.0]]])
    result = detect_relative_degree(sys)
    assert result.kind is RelativeDegreeKind.MIXED and result.order == 1


def test_detect_undetected_when_input_is_invisible():
    sys = LptvSystem([np.eye(2)] * 3, [np.zeros((2, 1))] * 3, [np.ones((1, 2))] * 3)
    result = detect_relative_degree(sys)
    assert result.kind is RelativeDegreeKind.UNDETECTED
    assert result.cap == 6


def test_detect_rejects_non_square():
    sys = random_system(0, 2, 2, 1, p=2)
    with pytest.raises(NonSquare):
        detect_relative_degree(sys)


@given(planted())
def test_detected_degree_and_markov_nonsingularity(case):
    sys, r = case
    result = detect_relative_degree(sys)
    assert result.order == r
    assert all(is_nonsingular(M) for M in markov_table(sys, r).values)
    for j in range(r):
        assert all(is_zero(M) for M in markov_table(sys, j).values)


@given(planted())
def test_relative_degree_is_similarity_invariant(case):
    sys, r = case
    rng = np.random.default_rng(sys.N + 10 * sys.n)
    T = [np.eye(sys.n) + 0.3 * rng.standard_normal((sys.n, sys.n)) for _ in range(sys.N)]
    Ti = [np.linalg.inv(t) for t in T]
    N = sys.N
    # time-varying state change x' = T_k x
    moved = LptvSystem(
        [T[(k + 1) % N] @ sys.A[k] @ Ti[k] for k in range(N)],
        [T[(k + 1) % N] @ sys.B[k] for k in range(N)],
        [sys.C[k] @ Ti[k] for k in range(N)],
        sys.D,
    )
    assert detect_relative_degree(moved).order == r


def test_factorization_example_4_3(ex43):
    S, table = markov_factorization(ex43, 1)
    assert S.shift == 1
    assert [m.item() for m in table.values] == pytest.approx([0.8, 1.0, 1.05], abs=1e-12)


def test_factorization_single_phase():
    sys = LptvSystem([[[0.5, 1.0], [0.0, 0.2]]], [[[0.0], [1.0]]], [[[1.0, 0.0]]])
    S, table = markov_factorization(sys, 2)
    assert np.array_equal(S.dense(), [[1.0]])
    assert table[0].item() == pytest.approx(1.0)


def test_factorization_planted_second_order():
    sys = random_lptv(np.random.default_rng(4), 3, 3, 1, 2)
    S, table = markov_factorization(sys, 2)
    assert S.shift == 2 and len(table) == 3


def test_factorization_rejects_wrong_order(ex43):
    with pytest.raises(FactorizationMismatch):
        markov_factorization(ex43, 2)
