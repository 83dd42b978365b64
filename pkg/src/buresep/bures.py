"""Bures metric engines, volume elements and conditioned tensors.

Three interchangeable engines compute the metric tensor of a parameterized
family at a point:

* ``metric_spectral`` -- the spectral sum over eigenvalue pairs, valid for
  any dimension and the default engine everywhere;
* ``metric_dittmann2`` -- the 2x2 closed form avoiding eigenvalues;
* ``metric_dittmann3`` -- the 3x3 closed form avoiding eigenvalues.

The closed forms define squared line elements, so the tensor is extracted
with the polarization identity, which is exact for quadratic forms.

``conditioned_metric_rhoQ`` evaluates the full 8x8 tensor of the
eight-parameter 3x3 family at a point of its four-parameter section, the
construction behind the conditional volume-element checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .linalg import PSD_TOL, herm_eig

ZERO_MODE_CUT = 1e-12


def metric_from_matrices(rho: np.ndarray, drhos: list[np.ndarray],
                         lam_cut: float = ZERO_MODE_CUT) -> np.ndarray:
    """Bures metric from a state and its parameter derivatives.

    G_ij = (1/2) sum_{a,b} Re[<a|d_i rho|b><b|d_j rho|a>] / (lam_a + lam_b),
    restricted to eigenvalue pairs with lam_a + lam_b > lam_cut.  Skipped
    pairs correspond to directions leaving the state space at rank-deficient
    boundary points.
    """
    lam, vecs = herm_eig(rho)
    if lam[0] < -PSD_TOL:
        raise DomainError(f"state not positive semidefinite (min eig {lam[0]:.3e})")
    d = [vecs.conj().T @ dr @ vecs for dr in drhos]
    k = len(drhos)
    den = lam[:, None] + lam[None, :]
    mask = den > lam_cut
    g = np.zeros((k, k))
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for i in range(k):
            for j in range(i, k):
                num = np.real(d[i] * d[j].conj())
                g[i, j] = g[j, i] = 0.5 * float(np.sum(num[mask] / den[mask]))
    return g


def metric_spectral(fam, theta, lam_cut: float = ZERO_MODE_CUT) -> np.ndarray:
    """Spectral-engine metric tensor of ``fam`` at parameter point ``theta``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    rho = fam.rho(theta)
    drhos = fam.drho(theta)
    return metric_from_matrices(rho.mat, drhos, lam_cut)


def _polarize(quad_form, drhos: list[np.ndarray]) -> np.ndarray:
    k = len(drhos)
    g = np.zeros((k, k))
    diag = [quad_form(dr) for dr in drhos]
    for i in range(k):
        g[i, i] = diag[i]
        for j in range(i + 1, k):
            q = quad_form(drhos[i] + drhos[j])
            g[i, j] = g[j, i] = 0.5 * (q - diag[i] - diag[j])
    return g


def metric_dittmann2(fam, theta) -> np.ndarray:
    """2x2 closed-form metric: d^2 = (1/4)Tr{dr dr + (dr - r dr)^2 / det r}."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    rho = fam.rho(theta).mat
    if rho.shape != (2, 2):
        raise DomainError("metric_dittmann2 requires a 2x2 state")
    det = float(np.linalg.det(rho).real)
    if abs(det) < 1e-14:
        raise DomainError("singular state: 2x2 closed form undefined")

    def q(dr):
        a = dr - rho @ dr
        val = np.trace(dr @ dr) + np.trace(a @ a) / det
        return 0.25 * float(val.real)

    return _polarize(q, fam.drho(theta))


def metric_dittmann3(fam, theta) -> np.ndarray:
    """3x3 closed-form metric.

    d^2 = (1/4)Tr{dr dr + 3/(1 - Tr r^3) (dr - r dr)^2
                + 3 det(r)/(1 - Tr r^3) (dr - r^{-1} dr)^2}
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    rho = fam.rho(theta).mat
    if rho.shape != (3, 3):
        raise DomainError("metric_dittmann3 requires a 3x3 state")
    det = float(np.linalg.det(rho).real)
    tr3 = float(np.trace(rho @ rho @ rho).real)
    if abs(det) < 1e-14:
        raise DomainError("singular state: 3x3 closed form undefined")
    if abs(1.0 - tr3) < 1e-14:
        raise DomainError("pure state: 3x3 closed form undefined")
    rinv = np.linalg.inv(rho)
    c = 3.0 / (1.0 - tr3)

    def q(dr):
        a = dr - rho @ dr
        b = dr - rinv @ dr
        val = np.trace(dr @ dr) + c * np.trace(a @ a) + c * det * np.trace(b @ b)
        return 0.25 * float(val.real)

    return _polarize(q, fam.drho(theta))


@dataclass(frozen=True)
class VolumeElementValue:
    """sqrt|det G| together with the sign of det G."""

    magnitude: float
    det_sign: int


def volume_element(g: np.ndarray) -> VolumeElementValue:
    """Volume element of a metric tensor: sqrt of |det|, sign reported."""
    g = np.atleast_2d(np.asarray(g, dtype=float))
    sign, logdet = np.linalg.slogdet(g)
    if sign == 0:
        return VolumeElementValue(0.0, 0)
    return VolumeElementValue(float(np.exp(0.5 * logdet)), int(sign))


def sqrt_det(g: np.ndarray) -> float:
    return volume_element(g).magnitude


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 via spectra."""
    lam, vecs = herm_eig(rho)
    lam = np.clip(lam, 0.0, None)
    sq = (vecs * np.sqrt(lam)) @ vecs.conj().T
    inner = sq @ sigma @ sq
    ev = np.linalg.eigvalsh(inner)
    return float(np.sum(np.sqrt(np.clip(ev, 0.0, None))) ** 2)


def bures_distance_sq(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared Bures distance 2(1 - sqrt(F))."""
    return 2.0 * (1.0 - np.sqrt(fidelity(rho, sigma)))


def conditioned_metric_rhoQ(v: float, x: float, y: float, z: float) -> np.ndarray:
    """Full 8x8 tensor of the eight-parameter 3x3 family at (v,x,y,z,0,0,0,0).

    Parameter order (v, x, y, z, s, t, u, w); the leading 4x4 block is the
    restricted-section metric and the trailing block belongs to the
    nullified parameters.
    """
    from .families import rho_q_family  # deferred: families imports this module

    fam = rho_q_family()
    theta = np.array([v, x, y, z, 0.0, 0.0, 0.0, 0.0])
    rho = fam.rho(theta)
    if rho.min_eigenvalue() <= 1e-9:
        raise DomainError("conditioned tensor requested at a boundary point")
    return metric_spectral(fam, theta)
