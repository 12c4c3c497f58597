"""Random periodic plants with a planted relative degree."""
from __future__ import annotations

import numpy as np

from .core import LptvSystem, PhaseSequence, monodromy, transition_product
from .cyclic import spectral_radius_cycled
from .inversion import invert
from .markov import RelativeDegreeKind, detect_relative_degree, markov_table

__all__ = ["random_lptv", "random_corpus"]


def _null_space(mat, width):
    # orthonormal basis of the last `width` right singular vectors
    _, _, vt = np.linalg.svd(mat)
    return vt[mat.shape[0]:].T[:, :width] if mat.shape[0] else np.eye(mat.shape[1])


def _well_conditioned(mat, floor):
    sv = np.linalg.svd(mat, compute_uv=False)
    return sv[-1] >= floor and sv[0] / sv[-1] <= 50.0


def _candidate(rng, N, n, m, r):
    A = [rng.standard_normal((n, n)) * rng.uniform(0.2, 0.8) / np.sqrt(n) for _ in range(N)]
    C = [rng.standard_normal((m, n)) for _ in range(N)]
    if r == 0:
        B = [rng.standard_normal((n, m)) for _ in range(N)]
        D = [rng.standard_normal((m, m)) + rng.choice([-2.0, 2.0]) * np.eye(m) for _ in range(N)]
        return LptvSystem(A, B, C, D)
    A_seq = PhaseSequence(A)
    B = []
    for k in range(N):
        # B_k must be invisible to every lower-order Markov parameter
        rows = [C[(k + j) % N] @ transition_product(A_seq, k + j, k + 1) for j in range(1, r)]
        if rows:
            basis = _null_space(np.vstack(rows), n - (r - 1) * m)
            B.append(basis @ rng.standard_normal((basis.shape[1], m)))
        else:
            B.append(rng.standard_normal((n, m)))
    return LptvSystem(A, B, C)


def random_lptv(rng, N, n, m, r, inverse_radius=(1e-3, 0.9), plant_radius=0.95,
                max_tries=2000) -> LptvSystem:
    """Square plant with uniform periodic relative degree ``r``.

    Rejection-samples until the plant's cycled spectral radius is below
    ``plant_radius``, every M_k^(r) is well conditioned, and the inverse
    monodromy spectral radius falls inside ``inverse_radius``. For r >= 1
    the state must be larger than r*m so the inverse keeps nontrivial
    dynamics.
    """
    if r >= 1 and n <= r * m:
        raise ValueError(f"planting relative degree {r} with m={m} needs n > {r * m}, got n={n}")
    lo, hi = inverse_radius
    for _ in range(max_tries):
        sys = _candidate(rng, N, n, m, r)
        if spectral_radius_cycled(sys.A) >= plant_radius:
            continue
        if not all(_well_conditioned(M, 0.2) for M in markov_table(sys, r).values):
            continue
        found = detect_relative_degree(sys)
        expected = RelativeDegreeKind.ZERO if r == 0 else RelativeDegreeKind.UNIFORM
        if found.kind is not expected or found.order != r:
            continue
        rho = float(np.max(np.abs(np.linalg.eigvals(monodromy(invert(sys).Gamma)))))
        if lo <= rho < hi:
            return sys
    raise RuntimeError(f"no admissible system found for N={N}, n={n}, m={m}, r={r}")


def random_corpus(seed: int = 0, count: int = 50, inverse_radius=(1e-3, 0.9)) -> list:
    """Deterministic list of ``(system, r)`` pairs covering N 1..5, n 1..4, r 0..2."""
    rng = np.random.default_rng(seed)
    corpus = []
    while len(corpus) < count:
        i = len(corpus)
        r = i % 3
        N = 1 + (i // 3) % 5
        m = 1 + int(rng.integers(0, 2)) if r < 2 else 1
        n_min = 1 if r == 0 else r * m + 1
        n = int(rng.integers(n_min, 5))
        corpus.append((random_lptv(rng, N, n, m, r, inverse_radius=inverse_radius), r))
    return corpus
