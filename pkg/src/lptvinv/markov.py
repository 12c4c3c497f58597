"""Periodic Markov parameters and periodic relative degree detection."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import LptvSystem, PhaseSequence, transition_product
from .cyclic import ShiftBlockCirculant, build_cycled, shift_matrix
from .errors import FactorizationMismatch, NonSquare

__all__ = [
    "DEFAULT_SV_TOL",
    "MarkovTable",
    "RelativeDegreeKind",
    "RelativeDegreeResult",
    "periodic_markov",
    "markov_table",
    "detect_relative_degree",
    "markov_factorization",
    "is_nonsingular",
    "is_zero",
]

DEFAULT_SV_TOL = 1e-9


def is_nonsingular(mat: np.ndarray, sv_tol: float = DEFAULT_SV_TOL) -> bool:
    """Scale-aware test: sigma_min > sv_tol * max(1, sigma_max)."""
    if mat.shape[0] != mat.shape[1]:
        return False
    if mat.size == 0:
        return True
    sv = np.linalg.svd(mat, compute_uv=False)
    return bool(sv[-1] > sv_tol * max(1.0, sv[0]))


def is_zero(mat: np.ndarray, sv_tol: float = DEFAULT_SV_TOL) -> bool:
    return mat.size == 0 or bool(np.max(np.abs(mat)) <= sv_tol)


@dataclass(frozen=True, eq=False)
class MarkovTable:
    """Periodic Markov parameters M_k of one order; order 0 holds D_k."""

    order: int
    values: PhaseSequence

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


class RelativeDegreeKind(enum.Enum):
    ZERO = "zero"
    UNIFORM = "uniform"
    MIXED = "mixed"
    UNDETECTED = "undetected"


@dataclass(frozen=True)
class RelativeDegreeResult:
    """Outcome of :func:`detect_relative_degree`.

    ``order`` is 0 for ZERO, r for UNIFORM, the order at which the
    non-uniformity showed up for MIXED, and None for UNDETECTED. ``witness``
    maps a classification label to the phases carrying it (MIXED only).
    """

    kind: RelativeDegreeKind
    order: int | None = None
    witness: dict = field(default_factory=dict)
    cap: int | None = None

    @property
    def supported(self) -> bool:
        return self.kind in (RelativeDegreeKind.ZERO, RelativeDegreeKind.UNIFORM)

    def describe(self) -> str:
        if self.kind is RelativeDegreeKind.ZERO:
            return "relative degree 0 (every D_k nonsingular)"
        if self.kind is RelativeDegreeKind.UNIFORM:
            return f"uniform periodic relative degree {self.order}"
        if self.kind is RelativeDegreeKind.MIXED:
            parts = ", ".join(f"{label}: {list(phases)}" for label, phases in self.witness.items())
            return f"non-uniform relative degree at order {self.order} ({parts})"
        return f"no nonzero Markov parameter up to order {self.cap}"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "order": self.order,
            "witness": {k: list(v) for k, v in self.witness.items()},
            "cap": self.cap,
        }


def periodic_markov(sys: LptvSystem, k: int, j: int) -> np.ndarray:
    """M_k^(j) = C_{k+j} A_{k+j-1} ... A_{k+1} B_k; j = 0 gives D_k."""
    if j < 0:
        raise ValueError(f"Markov order must be nonnegative, got {j}")
    if j == 0:
        return sys.D[k].copy()
    k = k % sys.N
    return sys.C[k + j] @ transition_product(sys, k + j, k + 1) @ sys.B[k]


def markov_table(sys: LptvSystem, order: int) -> MarkovTable:
    return MarkovTable(order, PhaseSequence(periodic_markov(sys, k, order) for k in range(sys.N)))


def _classify(mats, sv_tol):
    labels = {}
    for k, mat in enumerate(mats):
        if is_nonsingular(mat, sv_tol):
            labels.setdefault("nonsingular", []).append(k)
        elif is_zero(mat, sv_tol):
            labels.setdefault("zero", []).append(k)
        else:
            labels.setdefault("singular", []).append(k)
    return {label: tuple(phases) for label, phases in labels.items()}


def detect_relative_degree(sys: LptvSystem, cap: int | None = None,
                           sv_tol: float = DEFAULT_SV_TOL) -> RelativeDegreeResult:
    """Classify the plant as relative degree zero, uniform r, mixed or undetected.

    The search over orders stops at ``cap`` (default N*n, the cycled state
    dimension, which bounds the relative degree of an invertible square
    LTI system).
    """
    if sys.m != sys.p:
        raise NonSquare(f"inversion needs a square plant, got m={sys.m}, p={sys.p}")
    if cap is None:
        cap = max(1, sys.N * sys.n)
    labels = _classify(sys.D, sv_tol)
    if set(labels) == {"nonsingular"}:
        return RelativeDegreeResult(RelativeDegreeKind.ZERO, order=0)
    if set(labels) != {"zero"}:
        return RelativeDegreeResult(RelativeDegreeKind.MIXED, order=0, witness=labels)
    for j in range(1, cap + 1):
        labels = _classify((periodic_markov(sys, k, j) for k in range(sys.N)), sv_tol)
        if set(labels) == {"zero"}:
            continue
        if set(labels) == {"nonsingular"}:
            return RelativeDegreeResult(RelativeDegreeKind.UNIFORM, order=j)
        return RelativeDegreeResult(RelativeDegreeKind.MIXED, order=j, witness=labels)
    return RelativeDegreeResult(RelativeDegreeKind.UNDETECTED, cap=cap)


def _dense_markov(cyc, j):
    A, B, C, _ = cyc.dense()
    return C @ np.linalg.matrix_power(A, j - 1) @ B


def markov_factorization(sys: LptvSystem, r: int, atol: float = 1e-12):
    """Split the cycled Markov parameter of order r into shift and block-diagonal factors.

    Returns ``(S, M)`` with S the r-th power of the p-block cycled shift and
    M the table of M_k^(r), such that dense(C A^(r-1) B) = dense(S) dense(diag(M))
    for the cycled matrices. Both this identity and the vanishing of the
    lower-order cycled Markov parameters are checked on dense matrices,
    against ``atol * max(1, max|M|)``.
    """
    if r < 1:
        raise ValueError(f"factorization needs r >= 1, got {r}")
    cyc = build_cycled(sys)
    table = markov_table(sys, r)
    scale = max(1.0, max(float(np.max(np.abs(m))) if m.size else 0.0 for m in table.values))
    for j in range(1, r):
        lower = _dense_markov(cyc, j)
        dev = float(np.max(np.abs(lower))) if lower.size else 0.0
        if dev > atol * scale:
            raise FactorizationMismatch(
                f"cycled Markov parameter of order {j} is not zero (max |entry| {dev:.3e})", dev
            )
    S = shift_matrix(sys.N, sys.p, r)
    diag = ShiftBlockCirculant(table.values, 0)
    residual = _dense_markov(cyc, r) - S.dense() @ diag.dense()
    dev = float(np.max(np.abs(residual))) if residual.size else 0.0
    if dev > atol * scale:
        raise FactorizationMismatch(
            f"order-{r} cycled Markov parameter deviates from S^r diag(M) by {dev:.3e}", dev
        )
    return S, table
