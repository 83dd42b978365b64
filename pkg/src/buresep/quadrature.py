"""Singularity-tolerant 1D-4D quadrature and bisection.

The workhorse is tanh-sinh (double exponential) quadrature with progressive
level refinement, which handles the inverse-square-root endpoint
singularities that every feasibility-boundary prior in this package
exhibits.  For integrands whose singular endpoint factors are known in
closed form, the ``integrate_sqrt_*`` helpers remove them exactly by
substitution before applying tanh-sinh, which is what the high-precision
normalization checks use.

All node sets are fixed and summation order is deterministic, so results
are bit-identical across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NumericalError, UsageError

_T_MAX = 6.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and level limits for the tanh-sinh integrator.

    ``rel_tol`` defaults match the package convention: 1e-9 for 1D
    integrals, 1e-6 for nested (>= 2D) integration.  ``endpoint_inset``
    shrinks the interval before integration for hard singularities.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_levels: int = 12
    endpoint_inset: float = 0.0

    def __post_init__(self):
        if self.rel_tol <= 0:
            raise UsageError("rel_tol must be positive")
        if self.max_levels < 3:
            raise UsageError("max_levels must be at least 3")


DEFAULT_1D = QuadratureConfig()
DEFAULT_NESTED = QuadratureConfig(rel_tol=1e-6, max_levels=10)


@dataclass
class IntegralResult:
    value: float
    err_estimate: float
    evaluations: int
    converged: bool = True

    def __post_init__(self):
        if self.err_estimate < 0:
            raise UsageError("err_estimate must be nonnegative")

    def require_converged(self) -> "IntegralResult":
        if not self.converged:
            raise NumericalError(
                f"quadrature failed to converge (err~{self.err_estimate:.2e})"
            )
        return self


def _level_nodes(level: int) -> tuple[np.ndarray, np.ndarray]:
    """Positive-t tanh-sinh node offsets and weights for one level.

    Returns ``(omx, w)`` where ``omx = 1 - tanh(u)`` is the distance of the
    abscissa from the interval endpoint in [-1, 1] coordinates, computed in
    a form that stays exact down to the underflow threshold.  Level 0 holds
    all nodes at spacing h=1; level k adds the odd multiples of h = 2^-k,
    so the union over levels 0..k is the full rule at spacing 2^-k.
    """
    h = 2.0 ** (-level)
    if level == 0:
        ks = np.arange(0, int(_T_MAX / h) + 1)
    else:
        ks = np.arange(1, int(_T_MAX / h) + 1, 2)
    t = ks * h
    u = 0.5 * np.pi * np.sinh(t)
    with np.errstate(over="ignore"):
        omx = 2.0 / (1.0 + np.exp(2.0 * u))
        w = 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2
    keep = (w > 0.0) & (omx > 0.0)
    return omx[keep], w[keep]


def integrate_1d(f: Callable, a: float, b: float,
                 cfg: QuadratureConfig = DEFAULT_1D,
                 vectorized: bool = False) -> IntegralResult:
    """Tanh-sinh integration of ``f`` over [a, b].

    Endpoint singularities integrable up to order < 1 are fine.  Nodes are
    clamped strictly inside (a, b); non-finite integrand values at clamped
    nodes are dropped.  Returns a flagged (``converged=False``) result
    instead of raising when ``max_levels`` is exhausted.
    """
    if not (a < b):
        if a == b:
            return IntegralResult(0.0, 0.0, 0)
        raise UsageError("integrate_1d requires a < b")
    if cfg.endpoint_inset:
        a = a + cfg.endpoint_inset
        b = b - cfg.endpoint_inset

    half = 0.5 * (b - a)

    def eval_nodes(omx: np.ndarray) -> np.ndarray:
        # omx < 1 marks symmetric node pairs; omx == 1 is the center node.
        paired = omx < 1.0
        off = half * omx
        pts = np.concatenate([a + off, b - off[paired]])
        # nodes whose offset underflows the endpoint's float resolution are
        # dropped rather than evaluated on the (possibly singular) boundary
        inside = (pts > a) & (pts < b)
        vals = np.zeros(len(pts))
        # non-finite values at boundary-layer nodes carry negligible weight
        # and are dropped, so integrand overflow there is expected
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if vectorized:
                vals[inside] = np.asarray(f(pts[inside]), dtype=float)
            else:
                vals[inside] = [f(p) for p in pts[inside]]
        vals[~np.isfinite(vals)] = 0.0
        n = len(omx)
        out = vals[:n].copy()
        out[paired] += vals[n:]
        return out

    total = 0.0
    evaluations = 0
    prev = None
    err = math.inf
    for level in range(cfg.max_levels + 1):
        omx, w = _level_nodes(level)
        sums = eval_nodes(omx)
        evaluations += len(omx) + int(np.count_nonzero(omx < 1.0))
        total += float(np.dot(w, sums))
        h = 2.0 ** (-level)
        value = half * h * total
        if prev is not None:
            err = abs(value - prev)
            tol = max(cfg.rel_tol * abs(value), cfg.abs_tol)
            if err <= tol and level >= 2:
                return IntegralResult(value, err, evaluations)
        prev = value
    value = prev
    return IntegralResult(value, err, evaluations, converged=False)


def integrate_sqrt_both(smooth: Callable, a: float, b: float,
                        cfg: QuadratureConfig = DEFAULT_1D,
                        vectorized: bool = False) -> IntegralResult:
    """Integrate smooth(x) / sqrt((x-a)(b-x)) over [a, b].

    Uses the arcsine substitution x = mid + half*sin(phi), under which the
    kernel integrates exactly and only the smooth part is sampled.
    """
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)

    if vectorized:
        g = lambda phi: smooth(np.clip(mid + half * np.sin(phi), a, b))
    else:
        g = lambda phi: smooth(min(max(mid + half * math.sin(phi), a), b))
    return integrate_1d(g, -0.5 * np.pi, 0.5 * np.pi, cfg, vectorized=vectorized)


def integrate_sqrt_left(smooth: Callable, a: float, b: float,
                        cfg: QuadratureConfig = DEFAULT_1D,
                        vectorized: bool = False) -> IntegralResult:
    """Integrate smooth(x) / sqrt(x-a) over [a, b] via x = a + s**2."""
    s_max = math.sqrt(b - a)
    if vectorized:
        g = lambda s: 2.0 * smooth(np.clip(a + s * s, a, b))
    else:
        g = lambda s: 2.0 * smooth(min(a + s * s, b))
    return integrate_1d(g, 0.0, s_max, cfg, vectorized=vectorized)


def integrate_sqrt_right(smooth: Callable, a: float, b: float,
                         cfg: QuadratureConfig = DEFAULT_1D,
                         vectorized: bool = False) -> IntegralResult:
    """Integrate smooth(x) / sqrt(b-x) over [a, b] via x = b - s**2."""
    s_max = math.sqrt(b - a)
    if vectorized:
        g = lambda s: 2.0 * smooth(np.clip(b - s * s, a, b))
    else:
        g = lambda s: 2.0 * smooth(max(b - s * s, a))
    return integrate_1d(g, 0.0, s_max, cfg, vectorized=vectorized)


def integrate_nested(f: Callable, limits: Sequence, cfg: QuadratureConfig = DEFAULT_NESTED,
                     vectorized_inner: bool = False) -> IntegralResult:
    """Iterated 1D integration over ordered limits, innermost last.

    ``limits`` is a sequence of ``(lower, upper)`` pairs, outermost first;
    each bound is a number or a callable of the outer coordinates.
    ``f`` receives one float per dimension.  With ``vectorized_inner`` the
    innermost variable is passed to ``f`` as an array.
    """
    if not limits:
        raise UsageError("need at least one integration limit")
    evaluations = [0]
    errors = [0.0]
    flagged = [False]

    def level(outer: tuple, depth: int) -> float:
        lo, hi = limits[depth]
        lo = lo(*outer) if callable(lo) else float(lo)
        hi = hi(*outer) if callable(hi) else float(hi)
        if hi <= lo:
            return 0.0
        last = depth == len(limits) - 1
        if last:
            if vectorized_inner:
                g = lambda xs: f(*outer, xs)
                res = integrate_1d(g, lo, hi, cfg, vectorized=True)
            else:
                g = lambda x: f(*outer, x)
                res = integrate_1d(g, lo, hi, cfg)
        else:
            g = lambda x: level(outer + (x,), depth + 1)
            res = integrate_1d(g, lo, hi, cfg)
        evaluations[0] += res.evaluations
        if depth == 0:
            errors[0] = res.err_estimate
        if not res.converged:
            flagged[0] = True
        return res.value

    value = level((), 0)
    return IntegralResult(value, errors[0], evaluations[0], converged=not flagged[0])


def find_root_bisect(g: Callable, a: float, b: float, tol: float = 1e-12,
                     max_iter: int = 200) -> float:
    """Bisection root of a continuous sign-changing function on [a, b]."""
    fa = g(a)
    fb = g(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise UsageError("find_root_bisect requires a sign change on [a, b]")
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        fm = g(m)
        if fm == 0.0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
        if (b - a) <= 2 * tol:
            break
    return 0.5 * (a + b)
