"""Time-domain runs of plants, inverses and plant-to-inverse reconstruction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InverseSystem, LptvSystem
from .errors import InsufficientHorizon, InsufficientPreview, SimulationDiverged

__all__ = [
    "DIVERGENCE_BOUND",
    "SignalSpec",
    "SimulationTrace",
    "simulate_plant",
    "simulate_inverse",
    "reconstruct",
]

DIVERGENCE_BOUND = 1e12


@dataclass(frozen=True)
class SignalSpec:
    """Deterministic input signal of dimension ``dimension``.

    Kinds and their parameters (scalars broadcast over components):

    - ``sine``: amplitude, frequency in cycles/step, phase in rad
    - ``step``: level, onset
    - ``impulse``: level, time
    - ``constant``: level
    - ``sequence``: values, a T x dimension array; zero after its end
    """

    kind: str
    params: tuple = ()
    dimension: int = 1

    @classmethod
    def sine(cls, amplitude=1.0, frequency=0.05, phase=0.0, dimension=1):
        return cls("sine", (amplitude, frequency, phase), dimension)

    @classmethod
    def step(cls, level=1.0, onset=0, dimension=1):
        return cls("step", (level, int(onset)), dimension)

    @classmethod
    def impulse(cls, level=1.0, time=0, dimension=1):
        return cls("impulse", (level, int(time)), dimension)

    @classmethod
    def constant(cls, level=0.0, dimension=1):
        return cls("constant", (level,), dimension)

    @classmethod
    def sequence(cls, values):
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        values = tuple(map(tuple, values))
        return cls("sequence", (values,), len(values[0]) if values else 1)

    def __post_init__(self):
        if self.kind not in ("sine", "step", "impulse", "constant", "sequence"):
            raise ValueError(f"unknown signal kind {self.kind!r}")

    def __call__(self, k: int) -> np.ndarray:
        ones = np.ones(self.dimension)
        if self.kind == "sine":
            amp, freq, phase = self.params
            return ones * amp * np.sin(2 * np.pi * freq * k + phase)
        if self.kind == "step":
            level, onset = self.params
            return ones * (level if k >= onset else 0.0)
        if self.kind == "impulse":
            level, time = self.params
            return ones * (level if k == time else 0.0)
        if self.kind == "constant":
            return ones * self.params[0]
        values = self.params[0]
        return np.array(values[k], dtype=float) if 0 <= k < len(values) else np.zeros(self.dimension)

    def sample(self, T: int) -> np.ndarray:
        return np.array([self(k) for k in range(T)]).reshape(T, self.dimension)


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Sequences indexed k = 0 .. horizon-1, each stored as horizon x dim arrays.

    ``eps`` is the state error x - zeta and ``error`` the reconstruction
    error uhat - u; both exist only on merged reconstruction traces.
    """

    horizon: int
    period: int
    u: np.ndarray | None = None
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    zeta: np.ndarray | None = None
    uhat: np.ndarray | None = None
    eps: np.ndarray | None = None
    error: np.ndarray | None = None
    delay: int = 0

    @property
    def time(self) -> np.ndarray:
        return np.arange(self.horizon)

    @property
    def phase(self) -> np.ndarray:
        return self.time % self.period


def _vector(value, size, name):
    v = np.zeros(size) if value is None else np.atleast_1d(np.asarray(value, dtype=float)).ravel()
    if v.size != size:
        raise ValueError(f"{name} has {v.size} entries, expected {size}")
    return v


def _inputs(u, T, m):
    if isinstance(u, SignalSpec):
        if u.dimension != m:
            raise ValueError(f"signal has dimension {u.dimension}, plant expects {m}")
        return u.sample(T)
    u = np.asarray(u, dtype=float).reshape(-1, m)
    if len(u) < T:
        raise ValueError(f"input sequence has {len(u)} samples, horizon needs {T}")
    return u[:T]


def _guard(state, k, what):
    if not np.all(np.isfinite(state)):
        raise SimulationDiverged(f"{what} became non-finite at step {k}", k)
    if state.size and np.linalg.norm(state) > DIVERGENCE_BOUND:
        raise SimulationDiverged(
            f"{what} norm exceeded {DIVERGENCE_BOUND:.0e} at step {k}", k
        )


def simulate_plant(sys: LptvSystem, u, x0=None, T: int = 200) -> SimulationTrace:
    """Run x(k+1) = A_k x + B_k u, y = C_k x + D_k u for k = 0 .. T-1.

    ``u`` is a :class:`SignalSpec` or an array with at least T rows.
    """
    if T < 1:
        raise ValueError(f"horizon must be positive, got {T}")
    us = _inputs(u, T, sys.m)
    x = _vector(x0, sys.n, "x0")
    xs = np.empty((T, sys.n))
    ys = np.empty((T, sys.p))
    for k in range(T):
        A, B, C, D = sys.phase(k)
        xs[k] = x
        ys[k] = C @ x + D @ us[k]
        x = A @ x + B @ us[k]
        _guard(x, k + 1, "plant state")
        _guard(ys[k], k, "plant output")
    return SimulationTrace(horizon=T, period=sys.N, u=us, x=xs, y=ys)


def simulate_inverse(inv: InverseSystem, y, zeta0=None, T: int | None = None) -> SimulationTrace:
    """Run the inverse for T steps; step k consumes y[k + delay].

    ``y`` must hold at least T + delay samples (batch output preview).
    """
    y = np.asarray(y, dtype=float).reshape(-1, inv.p)
    r = inv.delay
    if T is None:
        T = len(y) - r
    if T < 1 or len(y) < T + r:
        raise InsufficientPreview(
            f"inverse with delay {r} needs {T + r} output samples for horizon {T}, got {len(y)}"
        )
    zeta = _vector(zeta0, inv.n, "zeta0")
    zs = np.empty((T, inv.n))
    uh = np.empty((T, inv.m))
    for k in range(T):
        yk = y[k + r]
        zs[k] = zeta
        uh[k] = inv.Omega[k] @ zeta + inv.Pi[k] @ yk
        zeta = inv.Gamma[k] @ zeta + inv.Lambda[k] @ yk
        _guard(zeta, k + 1, "inverse state")
    return SimulationTrace(horizon=T, period=inv.N, y=y[:T], zeta=zs, uhat=uh, delay=r)


def reconstruct(sys: LptvSystem, inv: InverseSystem, u_ref, x0=None, zeta0=None,
                T: int = 200) -> SimulationTrace:
    """Drive the plant with ``u_ref`` and rebuild the input through ``inv``.

    The plant runs T + delay steps so every inverse step has its output
    preview. The merged trace carries u, x, y, zeta, uhat and the errors
    eps = x - zeta and error = uhat - u over k = 0 .. T-1.
    """
    r = inv.delay
    if T < r + 1:
        raise InsufficientHorizon(f"horizon {T} is shorter than delay + 1 = {r + 1}")
    plant = simulate_plant(sys, u_ref, x0, T + r)
    inverse = simulate_inverse(inv, plant.y, zeta0, T)
    return SimulationTrace(
        horizon=T,
        period=sys.N,
        u=plant.u[:T],
        x=plant.x[:T],
        y=plant.y[:T],
        zeta=inverse.zeta,
        uhat=inverse.uhat,
        eps=plant.x[:T] - inverse.zeta,
        error=inverse.uhat - plant.u[:T],
        delay=r,
    )
