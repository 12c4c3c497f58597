"""Closed-form periodic inverses and the dense cycled-LTI cross-check.

For a plant with periodic relative degree r (r = 0 meaning every D_k is
nonsingular) the r-step-delayed inverse has, per phase k,

    K_k      = C_{k+r} A_{k+r-1} ... A_k
    Gamma_k  = A_k - B_k M_k^-1 K_k
    Lambda_k = B_k M_k^-1
    Omega_k  = -M_k^-1 K_k
    Pi_k     = M_k^-1

with M_k the order-r periodic Markov parameter (D_k for r = 0).
"""
from __future__ import annotations

import numpy as np

from .core import InverseSystem, LptvSystem, PhaseSequence, transition_product
from .cyclic import build_cycled, extract_blocks, shift_matrix
from .errors import RelativeDegreeMismatch, SingularMarkov, UnsupportedStructure
from .markov import (
    DEFAULT_SV_TOL,
    MarkovTable,
    RelativeDegreeKind,
    RelativeDegreeResult,
    detect_relative_degree,
    is_nonsingular,
    markov_table,
)

__all__ = [
    "unified_inverse",
    "invert_rd0",
    "invert_rdr",
    "invert",
    "oracle_invert_cycled",
]


def unified_inverse(sys: LptvSystem, r: int, table: MarkovTable | None = None,
                    sv_tol: float = DEFAULT_SV_TOL) -> InverseSystem:
    """Evaluate the per-phase inverse formulas for order ``r`` without gating.

    No relative degree check is made beyond nonsingularity of each M_k;
    callers normally go through :func:`invert`.
    """
    if table is None:
        table = markov_table(sys, r)
    gammas, lambdas, omegas, pis = [], [], [], []
    for k in range(sys.N):
        M = table[k]
        if not is_nonsingular(M, sv_tol):
            raise SingularMarkov(f"Markov parameter of order {r} is singular at phase {k}", k)
        K = sys.C[k + r] @ transition_product(sys, k + r, k)
        p = M.shape[0]
        sol = np.linalg.solve(M, np.hstack([K, np.eye(p)]))
        MinvK, Minv = sol[:, :K.shape[1]], sol[:, K.shape[1]:]
        gammas.append(sys.A[k] - sys.B[k] @ MinvK)
        lambdas.append(sys.B[k] @ Minv)
        omegas.append(-MinvK)
        pis.append(Minv)
    return InverseSystem(gammas, lambdas, omegas, pis, delay=r)


def invert_rd0(sys: LptvSystem, sv_tol: float = DEFAULT_SV_TOL) -> InverseSystem:
    """Causal inverse of a plant whose D_k are all nonsingular."""
    result = detect_relative_degree(sys, sv_tol=sv_tol)
    if result.kind is not RelativeDegreeKind.ZERO:
        raise RelativeDegreeMismatch(
            f"invert_rd0 needs nonsingular D_k at every phase; found {result.describe()}", result
        )
    return unified_inverse(sys, 0, sv_tol=sv_tol)


def invert_rdr(sys: LptvSystem, r: int, sv_tol: float = DEFAULT_SV_TOL) -> InverseSystem:
    """r-step-delayed inverse of a plant with uniform periodic relative degree r >= 1."""
    if r < 1:
        raise ValueError(f"invert_rdr needs r >= 1, got {r}")
    result = detect_relative_degree(sys, sv_tol=sv_tol)
    if result.kind is not RelativeDegreeKind.UNIFORM or result.order != r:
        raise RelativeDegreeMismatch(
            f"invert_rdr(r={r}) does not apply; found {result.describe()}", result
        )
    return unified_inverse(sys, r, sv_tol=sv_tol)


def _require_supported(sys, sv_tol, cap=None) -> RelativeDegreeResult:
    result = detect_relative_degree(sys, cap=cap, sv_tol=sv_tol)
    if not result.supported:
        raise UnsupportedStructure(
            f"{result.describe()}: non-uniform or undetected relative degree "
            "across phases is outside what the closed-form inverse covers",
            result,
        )
    return result


def invert(sys: LptvSystem, sv_tol: float = DEFAULT_SV_TOL, cap: int | None = None) -> InverseSystem:
    """Inverse of a square periodic plant, delayed by its relative degree.

    Raises
    ------
    NonSquare
        If m != p.
    UnsupportedStructure
        If the relative degree is mixed across phases or not found up to ``cap``.
    """
    result = _require_supported(sys, sv_tol, cap)
    return unified_inverse(sys, result.order, sv_tol=sv_tol)


def oracle_invert_cycled(sys: LptvSystem, sv_tol: float = DEFAULT_SV_TOL,
                         tol: float = 1e-9) -> InverseSystem:
    """Inverse computed through dense LTI formulas on the cycled plant.

    This is the slow validation path: it forms the Nn x Nn cycled matrices,
    applies the LTI inverse for relative degree r, absorbs the r-step output
    shift into the input matrices, and reads the periodic matrices back off
    the block pattern with :func:`extract_blocks`.
    """
    result = _require_supported(sys, sv_tol)
    r = result.order
    N, n, m, p = sys.N, sys.n, sys.m, sys.p
    A, B, C, D = build_cycled(sys).dense()
    if r == 0:
        X = np.linalg.inv(D)
        CAr = C
    else:
        X = np.linalg.inv(C @ np.linalg.matrix_power(A, r - 1) @ B)
        CAr = C @ np.linalg.matrix_power(A, r)
    A_inv = A - B @ X @ CAr
    B_inv = B @ X
    C_inv = -X @ CAr
    D_inv = X
    if r:
        S = shift_matrix(N, p, r).dense()
        B_inv = B_inv @ S
        D_inv = D_inv @ S
    return InverseSystem(
        extract_blocks(A_inv, N, 1, n, n, tol),
        extract_blocks(B_inv, N, 1, n, p, tol),
        extract_blocks(C_inv, N, 0, m, n, tol),
        extract_blocks(D_inv, N, 0, m, p, tol),
        delay=r,
    )
