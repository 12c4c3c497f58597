"""Periodic state-space data model.

An N-periodic plant

    x(k+1) = A_k x(k) + B_k u(k)
    y(k)   = C_k x(k) + D_k u(k)

stores exactly N matrices per coefficient. Every accessor takes absolute
time k and reduces it modulo N.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError

__all__ = [
    "PhaseSequence",
    "LptvSystem",
    "InverseSystem",
    "transition_product",
    "monodromy",
]


def _as_matrix(value) -> np.ndarray:
    mat = np.array(value, dtype=float)
    if mat.ndim == 0:
        mat = mat.reshape(1, 1)
    if mat.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got an array with shape {mat.shape}")
    mat.setflags(write=False)
    return mat


class PhaseSequence(Sequence):
    """N real matrices of identical shape, indexed modulo N.

    ``seq[k]`` works for any integer k, so ``seq[k] is seq[k + N]``.
    ``len(seq)`` is the period. Scalars are promoted to 1x1 matrices.
    """

    __slots__ = ("_entries", "_shape")

    def __init__(self, entries: Iterable):
        mats = tuple(_as_matrix(e) for e in entries)
        if not mats:
            raise DimensionError("a phase sequence needs at least one entry")
        shape = mats[0].shape
        for i, mat in enumerate(mats):
            if mat.shape != shape:
                raise DimensionError(
                    f"phase {i} has shape {mat.shape}, expected {shape} like phase 0"
                )
        self._entries = mats
        self._shape = shape

    @property
    def period(self) -> int:
        return len(self._entries)

    @property
    def shape(self) -> tuple:
        """Shape shared by every entry."""
        return self._shape

    @property
    def entries(self) -> tuple:
        return self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __getitem__(self, k):
        if isinstance(k, slice):
            raise TypeError("PhaseSequence does not support slicing; index by time")
        return self._entries[int(k) % len(self._entries)]

    def __iter__(self):
        return iter(self._entries)

    def __eq__(self, other):
        if not isinstance(other, PhaseSequence):
            return NotImplemented
        return len(self) == len(other) and all(
            np.array_equal(a, b) for a, b in zip(self, other)
        )

    __hash__ = None

    def __repr__(self):
        return f"PhaseSequence(period={self.period}, shape={self.shape})"


SequenceLike = Union[PhaseSequence, Iterable]


def _seq(value: SequenceLike) -> PhaseSequence:
    return value if isinstance(value, PhaseSequence) else PhaseSequence(value)


def _check(seq: PhaseSequence, name: str, period: int, shape: tuple) -> None:
    if seq.period != period:
        raise DimensionError(f"{name} has period {seq.period}, expected {period}")
    if seq.shape != shape:
        raise DimensionError(f"{name} blocks have shape {seq.shape}, expected {shape}")


@dataclass(frozen=True, eq=False)
class LptvSystem:
    """N-periodic discrete-time plant (A_k, B_k, C_k, D_k).

    ``D`` may be omitted, in which case every D_k is the p x m zero matrix.
    Squareness (m == p) is not required here; inversion routines check it.
    """

    A: PhaseSequence
    B: PhaseSequence
    C: PhaseSequence
    D: PhaseSequence = None

    def __init__(self, A: SequenceLike, B: SequenceLike, C: SequenceLike, D: SequenceLike = None):
        A, B, C = _seq(A), _seq(B), _seq(C)
        N = A.period
        n = A.shape[0]
        if A.shape != (n, n):
            raise DimensionError(f"A blocks must be square, got {A.shape}")
        m = B.shape[1]
        p = C.shape[0]
        _check(B, "B", N, (n, m))
        _check(C, "C", N, (p, n))
        if D is None:
            D = PhaseSequence([np.zeros((p, m))] * N)
        D = _seq(D)
        _check(D, "D", N, (p, m))
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)

    @property
    def N(self) -> int:
        return self.A.period

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    @property
    def dims(self) -> tuple:
        """(n, m, p)."""
        return self.n, self.m, self.p

    def phase(self, k: int) -> tuple:
        """The four matrices active at absolute time k."""
        return self.A[k], self.B[k], self.C[k], self.D[k]

    def __eq__(self, other):
        if not isinstance(other, LptvSystem):
            return NotImplemented
        return (self.A == other.A and self.B == other.B
                and self.C == other.C and self.D == other.D)

    __hash__ = None

    def __repr__(self):
        return f"LptvSystem(N={self.N}, n={self.n}, m={self.m}, p={self.p})"


@dataclass(frozen=True, eq=False)
class InverseSystem:
    """Periodic inverse realization with output preview ``delay``.

        zeta(k+1) = Gamma_k zeta(k) + Lambda_k y(k + delay)
        u(k)      = Omega_k zeta(k) + Pi_k y(k + delay)
    """

    Gamma: PhaseSequence
    Lambda: PhaseSequence
    Omega: PhaseSequence
    Pi: PhaseSequence
    delay: int = 0

    def __init__(self, Gamma, Lambda, Omega, Pi, delay: int = 0):
        Gamma, Lambda, Omega, Pi = map(_seq, (Gamma, Lambda, Omega, Pi))
        N = Gamma.period
        n = Gamma.shape[0]
        if Gamma.shape != (n, n):
            raise DimensionError(f"Gamma blocks must be square, got {Gamma.shape}")
        p = Lambda.shape[1]
        m = Omega.shape[0]
        _check(Lambda, "Lambda", N, (n, p))
        _check(Omega, "Omega", N, (m, n))
        _check(Pi, "Pi", N, (m, p))
        if int(delay) != delay or delay < 0:
            raise ValueError(f"delay must be a nonnegative integer, got {delay!r}")
        object.__setattr__(self, "Gamma", Gamma)
        object.__setattr__(self, "Lambda", Lambda)
        object.__setattr__(self, "Omega", Omega)
        object.__setattr__(self, "Pi", Pi)
        object.__setattr__(self, "delay", int(delay))

    @property
    def N(self) -> int:
        return self.Gamma.period

    @property
    def n(self) -> int:
        return self.Gamma.shape[0]

    @property
    def m(self) -> int:
        """Dimension of the reconstructed input."""
        return self.Omega.shape[0]

    @property
    def p(self) -> int:
        """Dimension of the consumed plant output."""
        return self.Lambda.shape[1]

    def max_abs_difference(self, other: "InverseSystem") -> float:
        """Largest entrywise deviation between two inverses of equal shape."""
        if self.delay != other.delay or self.N != other.N:
            return float("inf")
        worst = 0.0
        for mine, theirs in zip(
            (self.Gamma, self.Lambda, self.Omega, self.Pi),
            (other.Gamma, other.Lambda, other.Omega, other.Pi),
        ):
            if mine.shape != theirs.shape:
                return float("inf")
            for a, b in zip(mine, theirs):
                if a.size:
                    worst = max(worst, float(np.max(np.abs(a - b))))
        return worst

    def __repr__(self):
        return f"InverseSystem(N={self.N}, n={self.n}, m={self.m}, p={self.p}, delay={self.delay})"


def transition_product(sys, j: int, i: int) -> np.ndarray:
    """State transition product A_{j-1} ... A_i (identity when j == i).

    ``sys`` may be an :class:`LptvSystem` or a :class:`PhaseSequence` of
    square matrices.
    """
    seq = sys.A if isinstance(sys, LptvSystem) else sys
    if j < i:
        raise ValueError(f"transition_product needs j >= i, got j={j}, i={i}")
    if i < 0:
        raise ValueError(f"time indices must be nonnegative, got i={i}")
    out = np.eye(seq.shape[0])
    for t in range(i, j):
        out = seq[t] @ out
    return out


def monodromy(seq: SequenceLike) -> np.ndarray:
    """Product over one period, entries[N-1] @ ... @ entries[0]."""
    seq = _seq(seq)
    rows, cols = seq.shape
    if rows != cols:
        raise DimensionError(f"monodromy needs square entries, got {seq.shape}")
    out = seq[0].copy()
    for mat in seq.entries[1:]:
        out = mat @ out
    return out
