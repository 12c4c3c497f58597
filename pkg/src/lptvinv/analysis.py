"""Stability of periodic inverses and zeros of the cycled plant."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import InverseSystem, LptvSystem, monodromy
from .cyclic import ShiftBlockCirculant, build_cycled
from .errors import NonSquare
from .inversion import invert
from .markov import DEFAULT_SV_TOL

__all__ = [
    "DEFAULT_STAB_TOL",
    "DEFAULT_DROP_TOL",
    "StabilityReport",
    "ZeroCheck",
    "sort_eigenvalues",
    "stability_report",
    "system_matrix",
    "verify_zeros_pencil",
    "check_minimum_phase",
]

DEFAULT_STAB_TOL = 1e-10
DEFAULT_DROP_TOL = 1e-6


def sort_eigenvalues(values) -> np.ndarray:
    """Deterministic order: modulus descending, then argument ascending."""
    values = np.asarray(values, dtype=complex).ravel()
    order = sorted(range(values.size), key=lambda i: (-abs(values[i]), np.angle(values[i])))
    return values[order]


def _verdict(radius: float, tol: float) -> str:
    if not np.isfinite(radius):
        return "unstable"
    if radius < 1.0 - tol:
        return "stable"
    if radius <= 1.0 + tol:
        return "marginal"
    return "unstable"


@dataclass(frozen=True, eq=False)
class StabilityReport:
    monodromy_inv: np.ndarray
    monodromy_eigs: np.ndarray
    spectral_radius: float
    is_schur_stable: bool
    is_marginal: bool
    cycled_zeros: np.ndarray
    minimum_phase: bool
    root_relation_residual: float
    stab_tol: float
    nonfinite: bool = False

    @property
    def verdict(self) -> str:
        """'stable', 'marginal' or 'unstable', from the inverse monodromy."""
        if self.is_schur_stable:
            return "stable"
        return "marginal" if self.is_marginal else "unstable"

    @property
    def cycled_radius(self) -> float:
        return float(np.max(np.abs(self.cycled_zeros))) if self.cycled_zeros.size else 0.0

    @property
    def consistent(self) -> bool:
        """Whether the monodromy verdict and the cycled-zero verdict agree."""
        return self.is_schur_stable == self.minimum_phase


def stability_report(inv: InverseSystem, stab_tol: float = DEFAULT_STAB_TOL) -> StabilityReport:
    """Monodromy-based and cycled-zero-based stability verdicts of an inverse.

    The cycled zeros are the eigenvalues of the dense 1-shift embedding of
    the Gamma sequence, computed independently of the monodromy product.
    """
    phi = monodromy(inv.Gamma)
    cyc = ShiftBlockCirculant(inv.Gamma, 1).dense()
    nonfinite = not (np.all(np.isfinite(phi)) and np.all(np.isfinite(cyc)))
    if nonfinite:
        nan = float("nan")
        return StabilityReport(phi, np.full(inv.n, nan + 0j), nan, False, False,
                               np.full(cyc.shape[0], nan + 0j), False, nan, stab_tol, True)
    eigs = sort_eigenvalues(np.linalg.eigvals(phi)) if phi.size else np.zeros(0, complex)
    rho = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    zeros = sort_eigenvalues(np.linalg.eigvals(cyc)) if cyc.size else np.zeros(0, complex)
    rho_cyc = float(np.max(np.abs(zeros))) if zeros.size else 0.0
    state = _verdict(rho, stab_tol)
    return StabilityReport(
        monodromy_inv=phi,
        monodromy_eigs=eigs,
        spectral_radius=rho,
        is_schur_stable=state == "stable",
        is_marginal=state == "marginal",
        cycled_zeros=zeros,
        minimum_phase=_verdict(rho_cyc, stab_tol) == "stable",
        root_relation_residual=abs(rho_cyc - rho ** (1.0 / inv.N)),
        stab_tol=stab_tol,
    )


def system_matrix(sys: LptvSystem, z: complex) -> np.ndarray:
    """Dense system matrix [[z I - A, -B], [C, D]] of the cycled plant at z."""
    A, B, C, D = build_cycled(sys).dense()
    return np.block([[z * np.eye(A.shape[0]) - A, -B], [C, D]]).astype(complex)


@dataclass(frozen=True)
class ZeroCheck:
    candidate: complex
    probe: complex
    sigma: float
    sigma_probe: float
    passed: bool
    degenerate: bool = False


def _probe_point(z0, others, delta):
    best, best_gap = None, -1.0
    for j in range(16):
        # start off the real axis so real candidates do not probe along it
        point = z0 + delta * np.exp(1j * (0.3 + 2 * np.pi * j / 16))
        gap = min((abs(point - w) for w in others), default=np.inf)
        if gap > best_gap + 1e-12:
            best, best_gap = point, gap
    return best


def verify_zeros_pencil(sys: LptvSystem, candidates, delta: float | None = None,
                        drop_tol: float = DEFAULT_DROP_TOL) -> list:
    """Check that the cycled system matrix loses rank at each candidate.

    A candidate passes when sigma_min at the candidate is at most
    ``drop_tol`` times sigma_min at a probe point ``delta`` away (default
    0.1 * (1 + |z0|)), placed in the direction that keeps it farthest from
    the other candidates. A pencil that is nearly singular at the probe
    too is flagged ``degenerate`` and fails.
    """
    if sys.m != sys.p:
        raise NonSquare(f"the zero test needs a square plant, got m={sys.m}, p={sys.p}")
    A, B, C, D = build_cycled(sys).dense()
    eye = np.eye(A.shape[0])
    top = np.hstack([-A, -B]).astype(complex)
    bottom = np.hstack([C, D]).astype(complex)
    pad = np.hstack([eye, np.zeros_like(B)])

    def smin(z):
        P = np.vstack([top + z * pad, bottom])
        sv = np.linalg.svd(P, compute_uv=False)
        return float(sv[-1]), float(sv[0])

    candidates = [complex(z) for z in np.ravel(candidates)]
    checks = []
    for i, z0 in enumerate(candidates):
        step = 0.1 * (1.0 + abs(z0)) if delta is None else delta
        others = [w for j, w in enumerate(candidates) if j != i and abs(w - z0) > 0]
        probe = _probe_point(z0, others, step)
        sigma, _ = smin(z0)
        sigma_probe, sigma_max = smin(probe)
        degenerate = sigma_probe <= np.sqrt(np.finfo(float).eps) * max(1.0, sigma_max)
        passed = (not degenerate) and sigma <= drop_tol * sigma_probe
        checks.append(ZeroCheck(z0, complex(probe), sigma, sigma_probe, bool(passed), bool(degenerate)))
    return checks


def check_minimum_phase(sys: LptvSystem, sv_tol: float = DEFAULT_SV_TOL,
                        stab_tol: float = DEFAULT_STAB_TOL):
    """(is periodically minimum phase, full report) via the closed-form inverse."""
    report = stability_report(invert(sys, sv_tol=sv_tol), stab_tol=stab_tol)
    return report.is_schur_stable, report
