"""Cyclic reformulation and shift-structured block algebra.

The cycled form of an N-periodic plant is an LTI system of state
dimension N*n whose matrices each have exactly one nonzero block per
block-column. A matrix with block k at block position ((k + s) mod N, k)
is called an s-shift matrix here; the cycled A and B are 1-shift, C and D
are 0-shift (block diagonal).

Values keep their shift tag and their N blocks. Dense embeddings are built
only on request, for cross-checks and eigenvalue computations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import LptvSystem, PhaseSequence, monodromy
from .errors import DimensionError, StructureViolation

__all__ = [
    "ShiftBlockCirculant",
    "CycledSystem",
    "CycledSignalFrame",
    "build_cycled",
    "cycle_signal",
    "shift_matrix",
    "extract_blocks",
    "structured_product",
    "spectral_radius_cycled",
    "spectral_radius",
]


@dataclass(frozen=True, eq=False)
class ShiftBlockCirculant:
    """Block matrix with ``blocks[k]`` at block position ((k + shift) mod N, k)."""

    blocks: PhaseSequence
    shift: int

    def __post_init__(self):
        blocks = self.blocks
        if not isinstance(blocks, PhaseSequence):
            blocks = PhaseSequence(blocks)
            object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "shift", int(self.shift) % blocks.period)

    @property
    def period(self) -> int:
        return self.blocks.period

    @property
    def block_rows(self) -> int:
        return self.blocks.shape[0]

    @property
    def block_cols(self) -> int:
        return self.blocks.shape[1]

    @property
    def shape(self) -> tuple:
        N = self.period
        return N * self.block_rows, N * self.block_cols

    def dense(self) -> np.ndarray:
        N, br, bc = self.period, self.block_rows, self.block_cols
        out = np.zeros((N * br, N * bc))
        for k, block in enumerate(self.blocks):
            row = (k + self.shift) % N
            out[row * br:(row + 1) * br, k * bc:(k + 1) * bc] = block
        return out

    @property
    def T(self) -> "ShiftBlockCirculant":
        # block at ((k+s), k) moves to (k, k+s): column j = k+s holds blocks[j-s].T
        N, s = self.period, self.shift
        return ShiftBlockCirculant(
            PhaseSequence(self.blocks[(j - s) % N].T for j in range(N)), (N - s) % N
        )

    def __matmul__(self, other):
        if isinstance(other, ShiftBlockCirculant):
            return structured_product(self, other)
        return NotImplemented

    def __neg__(self):
        return ShiftBlockCirculant(PhaseSequence(-b for b in self.blocks), self.shift)

    def _combine(self, other, op):
        if not isinstance(other, ShiftBlockCirculant):
            return NotImplemented
        if other.shift != self.shift or other.blocks.shape != self.blocks.shape \
                or other.period != self.period:
            raise DimensionError("only equally shaped matrices with equal shift can be combined")
        return ShiftBlockCirculant(
            PhaseSequence(op(a, b) for a, b in zip(self.blocks, other.blocks)), self.shift
        )

    def __add__(self, other):
        return self._combine(other, np.add)

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __repr__(self):
        return (f"ShiftBlockCirculant(period={self.period}, shift={self.shift}, "
                f"block_shape={self.blocks.shape})")


@dataclass(frozen=True, eq=False)
class CycledSystem:
    """Cycled LTI quadruple of an N-periodic plant, kept in block form."""

    base: LptvSystem
    A: ShiftBlockCirculant
    B: ShiftBlockCirculant
    C: ShiftBlockCirculant
    D: ShiftBlockCirculant

    def dense(self) -> tuple:
        """Dense (A, B, C, D) of sizes Nn x Nn, Nn x Nm, Np x Nn, Np x Nm."""
        return self.A.dense(), self.B.dense(), self.C.dense(), self.D.dense()

    def simulate(self, u: np.ndarray, x0: np.ndarray) -> np.ndarray:
        """Run the dense cycled system on the plant input ``u`` (T x m).

        Inputs are fed as cycled frames and the initial cycled state is
        e_0 (x) x0. Returns the stacked cycled outputs, shape T x Np.
        """
        A, B, C, D = self.dense()
        N = self.base.N
        u = np.asarray(u, dtype=float).reshape(len(u), -1)
        x = cycle_signal(x0, 0, N).value
        out = []
        for k, uk in enumerate(u):
            uc = cycle_signal(uk, k, N).value
            out.append(C @ x + D @ uc)
            x = A @ x + B @ uc
        return np.array(out).reshape(len(u), -1)


@dataclass(frozen=True, eq=False)
class CycledSignalFrame:
    """e_{k mod N} (x) v: N stacked blocks with only block ``phase`` nonzero."""

    time: int
    phase: int
    period: int
    value: np.ndarray

    def block(self, i: int) -> np.ndarray:
        q = self.value.size // self.period
        return self.value[i * q:(i + 1) * q]


def cycle_signal(v, k: int, N: int) -> CycledSignalFrame:
    """Place ``v`` in block k mod N of an N-block stacked vector."""
    v = np.atleast_1d(np.asarray(v, dtype=float)).ravel()
    phase = int(k) % N
    value = np.zeros(N * v.size)
    value[phase * v.size:(phase + 1) * v.size] = v
    value.setflags(write=False)
    return CycledSignalFrame(time=int(k), phase=phase, period=N, value=value)


def build_cycled(sys: LptvSystem) -> CycledSystem:
    return CycledSystem(
        base=sys,
        A=ShiftBlockCirculant(sys.A, 1),
        B=ShiftBlockCirculant(sys.B, 1),
        C=ShiftBlockCirculant(sys.C, 0),
        D=ShiftBlockCirculant(sys.D, 0),
    )


def shift_matrix(N: int, q: int, r: int) -> ShiftBlockCirculant:
    """r-th power of the cycled shift with q x q identity blocks."""
    if q < 1 or r < 0:
        raise ValueError(f"shift_matrix needs q >= 1 and r >= 0, got q={q}, r={r}")
    eye = np.eye(q)
    return ShiftBlockCirculant(PhaseSequence([eye] * N), r % N)


def structured_product(left: ShiftBlockCirculant, right: ShiftBlockCirculant) -> ShiftBlockCirculant:
    """Product of an s1-shift and an s2-shift matrix, an (s1 + s2)-shift matrix.

    Right block k lands in block-row k + s2, where it meets left block k + s2.
    """
    if left.period != right.period:
        raise DimensionError(f"periods differ: {left.period} vs {right.period}")
    if left.block_cols != right.block_rows:
        raise DimensionError(
            f"block shapes {left.blocks.shape} and {right.blocks.shape} are not conformable"
        )
    s2 = right.shift
    blocks = PhaseSequence(left.blocks[k + s2] @ right.blocks[k] for k in range(right.period))
    return ShiftBlockCirculant(blocks, left.shift + s2)


def extract_blocks(dense, N: int, shift: int, block_rows: int, block_cols: int,
                   tol: float = 1e-9) -> PhaseSequence:
    """Read the s-shift blocks out of a dense matrix and validate the pattern.

    Every entry outside the pattern must satisfy
    ``|entry| <= tol * (1 + max|dense|)``; otherwise StructureViolation
    reports the worst offender.
    """
    dense = np.asarray(dense, dtype=float)
    if dense.shape != (N * block_rows, N * block_cols):
        raise DimensionError(
            f"dense matrix has shape {dense.shape}, expected {(N * block_rows, N * block_cols)}"
        )
    mask = np.ones(dense.shape, dtype=bool)
    blocks = []
    for k in range(N):
        row = (k + shift) % N
        rs = slice(row * block_rows, (row + 1) * block_rows)
        cs = slice(k * block_cols, (k + 1) * block_cols)
        blocks.append(dense[rs, cs].copy())
        mask[rs, cs] = False
    if dense.size:
        limit = tol * (1.0 + float(np.max(np.abs(dense))))
        off = np.where(mask, np.abs(dense), 0.0)
        worst = np.unravel_index(np.argmax(off), off.shape)
        if off[worst] > limit:
            raise StructureViolation(
                f"entry {worst} = {dense[worst]:.3e} lies outside the {shift % N}-shift "
                f"pattern (limit {limit:.3e})",
                row=int(worst[0]), col=int(worst[1]), magnitude=float(off[worst]),
            )
    return PhaseSequence(blocks)


def spectral_radius(mat) -> float:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(mat))))


def spectral_radius_cycled(seq) -> float:
    """Spectral radius of the 1-shift embedding, from the N x smaller monodromy."""
    seq = seq if isinstance(seq, PhaseSequence) else PhaseSequence(seq)
    return spectral_radius(monodromy(seq)) ** (1.0 / seq.period)
