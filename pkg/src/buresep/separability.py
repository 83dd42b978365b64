"""Separability predicates, separable intervals, and entanglement measures."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .families import DensityFamily, Interval
from .linalg import SIGMA_Y, DensityMatrix, kron, partial_transpose
from .quadrature import find_root_bisect

PPT_TOL = 1e-10

_YY = kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class SeparabilityVerdict:
    ppt_min_eigenvalue: float
    is_ppt: bool
    criterion: str  # 'exact', 'necessary-only', or 'external'


def min_pt_eigenvalue(rho: DensityMatrix) -> float:
    return float(np.linalg.eigvalsh(partial_transpose(rho))[0])


def is_separable(rho: DensityMatrix) -> SeparabilityVerdict:
    """Partial-transpose test, decisive only when d_A * d_B <= 6."""
    if not rho.is_bipartite():
        raise UsageError("separability needs a declared (d_A, d_B) factorization")
    m = min_pt_eigenvalue(rho)
    decisive = rho.dims[0] * rho.dims[1] <= 6
    return SeparabilityVerdict(
        ppt_min_eigenvalue=m,
        is_ppt=m >= -PPT_TOL,
        criterion="exact" if decisive else "necessary-only",
    )


def _pt_root_from(fam: DensityFamily, start: float, end: float, tol: float) -> float:
    """Root of the minimum PT eigenvalue between an interior point and an endpoint."""
    def g(t: float) -> float:
        return min_pt_eigenvalue(fam.rho(np.array([t])))
    if g(end) >= -PPT_TOL:
        return end
    return find_root_bisect(g, min(start, end), max(start, end), tol)


def separable_interval(fam: DensityFamily, tol: float = 1e-10) -> tuple[Interval, str]:
    """Separable parameter interval of a one-parameter family.

    For families where the partial-transpose criterion is decisive the
    endpoints are located by bisection inside the feasible interval; for
    families carrying a literature range that range is returned as-is.
    """
    if fam.k != 1:
        raise UsageError("separable_interval works on one-parameter families")
    if fam.separable.kind == "external":
        return fam.separable.region, "external"
    if not isinstance(fam.feasible, Interval):
        raise UsageError(f"family {fam.id} lacks a feasible interval")
    decisive = fam.dims[0] * fam.dims[1] <= 6
    if not decisive:
        raise UsageError(
            f"family {fam.id}: partial transpose is not decisive at "
            f"{fam.dims[0]}x{fam.dims[1]} and no literature range is declared"
        )
    lo, hi = fam.feasible.lo, fam.feasible.hi

    def g(t: float) -> float:
        return min_pt_eigenvalue(fam.rho(np.array([t])))

    seeds = lo + (hi - lo) * (np.arange(1, 32) / 32.0)
    values = [g(t) for t in seeds]
    best = int(np.argmax(values))
    if values[best] < 0.0:
        raise UsageError(f"family {fam.id}: no PPT-positive point found")
    seed = float(seeds[best])
    left = _pt_root_from(fam, seed, lo, tol)
    right = _pt_root_from(fam, seed, hi, tol)
    return Interval(left, right, singular=(left == lo, right == hi)), "ppt"


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state.

    C = max(0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)) with mu the
    descending eigenvalues of rho (sy x sy) rho* (sy x sy), conjugation
    taken in the computational product basis.
    """
    if rho.dims != (2, 2):
        raise UsageError("concurrence is defined for two-qubit states")
    tilde = _YY @ rho.mat.conj() @ _YY
    mu = np.linalg.eigvals(rho.mat @ tilde)
    mu = np.sqrt(np.clip(mu.real, 0.0, None))
    mu[::-1].sort()
    return max(0.0, float(mu[0] - mu[1] - mu[2] - mu[3]))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def eof_from_concurrence(c: float) -> float:
    if c <= 0.0:
        return 0.0
    if c >= 1.0:
        return 1.0
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - c * c)))


def eof(rho: DensityMatrix) -> float:
    """Entanglement of formation of a two-qubit state."""
    return eof_from_concurrence(concurrence(rho))
