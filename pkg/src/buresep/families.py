"""Registry of the parameterized density-matrix families.

Every family packages a parameter map ``rho(theta)``, its derivative map
``drho(theta)``, and region metadata.  All but one family are affine in
their parameters, so the derivative maps are constant matrices; the
four-parameter unitary family carries an analytic derivative in the
rotation angle.

Feasible intervals are stored as printed, to the decimals the source
gives, and are re-derived by eigenvalue bisection in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import UsageError
from .linalg import DensityMatrix, PAULIS, kron, pauli_two_qubit
from .quadrature import find_root_bisect

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class Interval:
    """1D parameter interval with singular-endpoint flags."""

    lo: float
    hi: float
    singular: tuple[bool, bool] = (True, True)

    def describe(self) -> str:
        marks = ["*" if s else "" for s in self.singular]
        return f"[{self.lo:g}{marks[0]}, {self.hi:g}{marks[1]}]"


@dataclass(frozen=True)
class NestedRegion:
    """Ordered-limit region, outermost variable first.

    ``limits`` holds (lower, upper) pairs whose entries are numbers or
    callables of the outer coordinates.  ``to_params`` maps integration
    coordinates to family parameters when a change of variables is used;
    ``jacobian`` is the constant measure factor of that map and ``weight``
    a symmetry multiplier.
    """

    names: tuple[str, ...]
    limits: tuple
    description: str
    to_params: Callable | None = None
    jacobian: float = 1.0
    weight: float = 1.0

    def describe(self) -> str:
        return self.description


@dataclass(frozen=True)
class SeparableSpec:
    """How a family's separable set is determined.

    kind 'ppt' means derived from the partial-transpose criterion,
    'external' a literature range, 'region' an explicit region, and
    'all' that every feasible state is separable.
    """

    kind: str
    region: object | None = None


@dataclass
class DensityFamily:
    id: str
    dims: tuple[int, ...]
    k: int
    param_names: tuple[str, ...]
    rho: Callable[[np.ndarray], DensityMatrix]
    drho: Callable[[np.ndarray], list[np.ndarray]]
    feasible: object
    separable: SeparableSpec
    prior_mode: str = "metric-engine"
    notes: str = ""

    def interior_point(self) -> np.ndarray:
        if isinstance(self.feasible, Interval):
            return np.array([0.5 * (self.feasible.lo + self.feasible.hi)])
        raise UsageError(f"no canonical interior point for family {self.id}")

    def metadata(self) -> dict:
        feas = self.feasible.describe() if hasattr(self.feasible, "describe") else str(self.feasible)
        sep = self.separable.kind
        if self.separable.region is not None and hasattr(self.separable.region, "describe"):
            sep += f" {self.separable.region.describe()}"
        return {
            "id": self.id,
            "dims": list(self.dims),
            "k": self.k,
            "params": list(self.param_names),
            "feasible": feas,
            "separable": sep,
            "prior_mode": self.prior_mode,
        }


def _affine(base: np.ndarray, basis: Sequence[np.ndarray], dims, tolerant=True):
    base = np.asarray(base, dtype=complex)
    basis = [np.asarray(b, dtype=complex) for b in basis]

    def rho(theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        m = base.copy()
        for c, b in zip(theta, basis):
            m = m + c * b
        return DensityMatrix(m, dims, boundary_tolerant=tolerant)

    def drho(theta):
        return [b.copy() for b in basis]

    return rho, drho


def _correlation_matrix(zeta: np.ndarray) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    for i in range(3):
        for j in range(3):
            if zeta[i, j]:
                m += zeta[i, j] * kron(PAULIS[i], PAULIS[j])
    return m


def _zeta_direction(pattern: np.ndarray) -> np.ndarray:
    """dρ for a one-parameter correlation pattern (zeta_ij = pattern_ij * z)."""
    return _correlation_matrix(pattern)


def _one_param_pauli(fam_id, pattern, feasible, separable, stokes=False, notes=""):
    pattern = np.asarray(pattern, dtype=float)
    direction = _zeta_direction(pattern)
    if stokes:
        i2 = np.eye(2, dtype=complex)
        for i in range(3):
            direction = direction + kron(PAULIS[i], i2) + kron(i2, PAULIS[i])
    rho, drho = _affine(np.eye(4, dtype=complex) / 4, [direction], (2, 2))
    return DensityFamily(
        id=fam_id, dims=(2, 2), k=1, param_names=("zeta",),
        rho=rho, drho=drho, feasible=feasible, separable=separable, notes=notes,
    )


def family_s1_equal_intra() -> DensityFamily:
    """Equal intra-directional correlations: zeta_ii = z."""
    return _one_param_pauli(
        "s1_equal_intra", np.eye(3),
        Interval(-0.25, 1 / 12), SeparableSpec("ppt"),
    )


def family_s2_two_pos_one_neg() -> DensityFamily:
    """zeta_xx = zeta_yy = z, zeta_zz = -z."""
    return _one_param_pauli(
        "s2_two_pos_one_neg", np.diag([1.0, 1.0, -1.0]),
        Interval(-1 / 12, 0.25), SeparableSpec("ppt"),
    )


def family_s3_equal_inter() -> DensityFamily:
    """All six inter-directional correlations equal, intra zero."""
    return _one_param_pauli(
        "s3_equal_inter", np.ones((3, 3)) - np.eye(3),
        Interval(-0.125, 0.0625), SeparableSpec("ppt"),
    )


def family_s4_intra_vs_inter() -> DensityFamily:
    """Intra correlations z, inter correlations -z."""
    return _one_param_pauli(
        "s4_intra_vs_inter", 2 * np.eye(3) - np.ones((3, 3)),
        Interval(-0.05, 1 / 12), SeparableSpec("ppt"),
    )


def family_s5_all_nine() -> DensityFamily:
    """All nine correlations equal."""
    return _one_param_pauli(
        "s5_all_nine", np.ones((3, 3)),
        Interval(-1 / 12, 1 / 12), SeparableSpec("all"),
    )


def family_s6_all_fifteen() -> DensityFamily:
    """All fifteen parameters (Stokes and correlations) equal."""
    return _one_param_pauli(
        "s6_all_fifteen", np.ones((3, 3)),
        Interval(-0.0386751, 1 / 12), SeparableSpec("all"), stokes=True,
    )


def family_s7_antisym_inter() -> DensityFamily:
    """Anti-correlated in different directions: zeta_ij = -zeta_ji = z, i<j."""
    pattern = np.zeros((3, 3))
    pattern[0, 1] = pattern[0, 2] = pattern[1, 2] = 1.0
    pattern[1, 0] = pattern[2, 0] = pattern[2, 1] = -1.0
    lim = 1 / (8 * SQRT3)
    return _one_param_pauli(
        "s7_antisym_inter", pattern,
        Interval(-lim, lim), SeparableSpec("all"),
        notes="interpreted as one-parameter; see decisions ledger",
    )


def singlet_projector() -> np.ndarray:
    v = np.zeros(4, dtype=complex)
    v[1] = 1 / math.sqrt(2)
    v[2] = -1 / math.sqrt(2)
    return np.outer(v, v.conj())


def family_werner_qq() -> DensityFamily:
    """Two-qubit Werner states (1-eps) I/4 + eps |psi-><psi-|."""
    p = singlet_projector()
    rho, drho = _affine(np.eye(4, dtype=complex) / 4, [p - np.eye(4, dtype=complex) / 4], (2, 2))
    return DensityFamily(
        id="werner_qq", dims=(2, 2), k=1, param_names=("eps",),
        rho=rho, drho=drho,
        feasible=Interval(0.0, 1.0, singular=(False, True)),
        separable=SeparableSpec("ppt"),
    )


def family_twoparam_intra() -> DensityFamily:
    """zeta_xx = zeta_yy = z with independent zeta_zz = eta."""
    b1 = _zeta_direction(np.diag([1.0, 1.0, 0.0]))
    b2 = _zeta_direction(np.diag([0.0, 0.0, 1.0]))
    rho, drho = _affine(np.eye(4, dtype=complex) / 4, [b1, b2], (2, 2))
    region = NestedRegion(
        names=("eta", "zeta"),
        limits=((-0.25, 0.25), (lambda e: (-1 + 4 * e) / 8, lambda e: (1 - 4 * e) / 8)),
        description="eta in [-1/4,1/4]; zeta in [(-1+4 eta)/8, (1-4 eta)/8]",
        to_params=lambda e, z: np.array([z, e]),
    )
    sep = NestedRegion(
        names=("eta", "zeta"),
        limits=((-0.25, 0.0), (lambda e: -(1 + 4 * e) / 8, lambda e: (1 + 4 * e) / 8)),
        description="rhombus: full slice for eta>0, |zeta|<=(1+4 eta)/8 for eta<0",
        to_params=lambda e, z: np.array([z, e]),
    )
    return DensityFamily(
        id="twoparam_intra", dims=(2, 2), k=2, param_names=("zeta", "eta"),
        rho=rho, drho=drho, feasible=region, separable=SeparableSpec("region", sep),
    )


def family_threeparam_intra() -> DensityFamily:
    """Independent intra-directional correlations (zeta, eta, kappa)."""
    basis = [_zeta_direction(np.diag(e)) for e in np.eye(3)]
    rho, drho = _affine(np.eye(4, dtype=complex) / 4, basis, (2, 2))

    def to_params(z, u, e):
        return np.array([z, e, -0.25 + z - e - u / 4])

    region = NestedRegion(
        names=("zeta", "upsilon", "eta"),
        limits=(
            (-0.25, 0.25),
            (lambda z: 2 * (-1 + 4 * z), 0.0),
            (lambda z, u: (-2 - u) / 8, lambda z, u: (8 * z - u) / 8),
        ),
        description=("zeta in [-1/4,1/4]; upsilon in [2(-1+4 zeta),0]; "
                     "eta in [(-2-upsilon)/8,(8 zeta-upsilon)/8]; "
                     "kappa = -1/4 + zeta - eta - upsilon/4"),
        to_params=to_params, jacobian=0.25,
    )
    sep = NestedRegion(
        names=("zeta", "upsilon", "eta"),
        limits=(
            (0.0, 0.25),
            (lambda z: 2 * (-1 + 4 * z), 0.0),
            (lambda z, u: (-2 + 8 * z - u) / 8, lambda z, u: -u / 8),
        ),
        description=("zeta in [0,1/4]; upsilon in [2(-1+4 zeta),0]; "
                     "eta in [(-2+8 zeta-upsilon)/8, -upsilon/8]"),
        to_params=to_params, jacobian=0.25,
    )
    return DensityFamily(
        id="threeparam_intra", dims=(2, 2), k=3, param_names=("zeta", "eta", "kappa"),
        rho=rho, drho=drho, feasible=region,
        separable=SeparableSpec("region", sep),
        notes="separable region taken as the printed ordered limits; see ledger",
    )


def family_diag4() -> DensityFamily:
    """Diagonal four-level states diag(x, y, z, 1-x-y-z)."""
    base = np.diag([0, 0, 0, 1]).astype(complex)
    basis = [np.diag(d).astype(complex) for d in
             ([1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1])]
    rho, drho = _affine(base, basis, (2, 2))
    region = NestedRegion(
        names=("x", "y", "z"),
        limits=((0.0, 1.0), (lambda x: 0.0, lambda x: 1 - x),
                (lambda x, y: 0.0, lambda x, y: 1 - x - y)),
        description="probability simplex x,y,z >= 0, x+y+z <= 1",
    )
    return DensityFamily(
        id="diag4", dims=(2, 2), k=3, param_names=("x", "y", "z"),
        rho=rho, drho=drho, feasible=region, separable=SeparableSpec("all"),
    )


ROTATION_GENERATOR = np.zeros((4, 4), dtype=complex)
ROTATION_GENERATOR[2, 1] = 1j
ROTATION_GENERATOR[1, 2] = -1j


def rotation_unitary(w: float) -> np.ndarray:
    """exp(i w P) for the generator with +-i in the (3,2)/(2,3) cells."""
    c, s = math.cos(w), math.sin(w)
    u = np.eye(4, dtype=complex)
    u[1, 1] = c
    u[1, 2] = s
    u[2, 1] = -s
    u[2, 2] = c
    return u


def family_diag4_unitary() -> DensityFamily:
    """Diagonal states conjugated by the one-parameter rotation exp(i w P)."""
    diag_dirs = [np.diag(d).astype(complex) for d in
                 ([1, 0, 0, -1], [0, 1, 0, -1], [0, 0, 1, -1])]

    def rho(theta):
        x, y, z, w = theta
        d = np.diag([x, y, z, 1 - x - y - z]).astype(complex)
        u = rotation_unitary(w)
        return DensityMatrix(u @ d @ u.conj().T, (2, 2), boundary_tolerant=True)

    def drho(theta):
        x, y, z, w = theta
        u = rotation_unitary(w)
        uh = u.conj().T
        out = [u @ d @ uh for d in diag_dirs]
        m = rho(theta).mat
        out.append(1j * (ROTATION_GENERATOR @ m - m @ ROTATION_GENERATOR))
        return out

    region = NestedRegion(
        names=("x", "y", "z", "w"),
        limits=((0.0, 1.0), (lambda x: 0.0, lambda x: 1 - x),
                (lambda x, y: 0.0, lambda x, y: 1 - x - y),
                (0.0, 2 * math.pi)),
        description="simplex x,y,z times w in [0, 2 pi]",
    )
    return DensityFamily(
        id="diag4_unitary", dims=(2, 2), k=4, param_names=("x", "y", "z", "w"),
        rho=rho, drho=drho, feasible=region, separable=SeparableSpec("ppt"),
    )


def max_entangled_qutrit() -> np.ndarray:
    v = np.zeros(9, dtype=complex)
    for i in range(3):
        v[3 * i + i] = 1 / SQRT3
    return np.outer(v, v.conj())


def family_werner_qutrit() -> DensityFamily:
    """Two-qutrit Werner states (1-eps) I/9 + eps |Phi><Phi|."""
    p = max_entangled_qutrit()
    rho, drho = _affine(np.eye(9, dtype=complex) / 9, [p - np.eye(9, dtype=complex) / 9], (3, 3))
    return DensityFamily(
        id="werner_qutrit", dims=(3, 3), k=1, param_names=("eps",),
        rho=rho, drho=drho,
        feasible=Interval(0.0, 1.0, singular=(False, True)),
        separable=SeparableSpec("external", Interval(0.0, 0.25, singular=(False, False))),
        prior_mode="closed-form",
    )


def sixlevel_matrix(nu: float) -> np.ndarray:
    m = np.zeros((6, 6), dtype=complex)
    d = [1 + 2 * SQRT3 * nu, 1 + 2 * SQRT3 * nu, 1 - 4 * SQRT3 * nu,
         1 - 2 * SQRT3 * nu, 1 - 2 * SQRT3 * nu, 1 + 4 * SQRT3 * nu]
    for i in range(6):
        m[i, i] = d[i]
    m[0, 2] = m[2, 0] = 6 * nu
    m[1, 5] = -12j * nu
    m[5, 1] = 12j * nu
    m[3, 5] = m[5, 3] = -6 * nu
    return m / 6.0


def family_sixlevel() -> DensityFamily:
    """One-parameter 6x6 family with fully mixed 2x2 and 3x3 reductions."""
    direction = sixlevel_matrix(1.0) - sixlevel_matrix(0.0)
    rho, drho = _affine(np.eye(6, dtype=complex) / 6, [direction], (2, 3))
    return DensityFamily(
        id="sixlevel_s1", dims=(2, 3), k=1, param_names=("nu",),
        rho=rho, drho=drho,
        feasible=Interval(-0.0546647, 0.10277),
        separable=SeparableSpec("ppt"),
    )


def family_werner_qubit_qutrit() -> DensityFamily:
    """Qubit-qutrit Werner states around (|00> + |11>)/sqrt(2)."""
    v = np.zeros(6, dtype=complex)
    v[0] = v[4] = 1 / math.sqrt(2)
    p = np.outer(v, v.conj())
    rho, drho = _affine(np.eye(6, dtype=complex) / 6, [p - np.eye(6, dtype=complex) / 6], (2, 3))
    return DensityFamily(
        id="werner_qubit_qutrit", dims=(2, 3), k=1, param_names=("eps",),
        rho=rho, drho=drho,
        feasible=Interval(0.0, 1.0, singular=(False, True)),
        separable=SeparableSpec("ppt"),
        prior_mode="closed-form",
    )


def rho_q_family() -> DensityFamily:
    """Eight-parameter 3x3 family rho_Q; order (v, x, y, z, s, t, u, w)."""
    def entry(i, j, val):
        m = np.zeros((3, 3), dtype=complex)
        m[i, j] = val
        return m

    basis = [
        0.5 * (entry(0, 0, 1) + entry(1, 1, -2) + entry(2, 2, 1)),           # v
        0.5 * (entry(0, 2, 1) + entry(2, 0, 1)),                             # x
        0.5 * (entry(0, 2, -1j) + entry(2, 0, 1j)),                          # y
        0.5 * (entry(0, 0, 1) + entry(2, 2, -1)),                            # z
        0.5 * (entry(1, 2, 1) + entry(2, 1, 1)),                             # s
        0.5 * (entry(1, 2, -1j) + entry(2, 1, 1j)),                          # t
        0.5 * (entry(0, 1, 1) + entry(1, 0, 1)),                             # u
        0.5 * (entry(0, 1, -1j) + entry(1, 0, 1j)),                          # w
    ]
    base = np.diag([0, 1, 0]).astype(complex)
    rho, drho = _affine(base, basis, (3,))
    return DensityFamily(
        id="rho_q", dims=(3,), k=8,
        param_names=("v", "x", "y", "z", "s", "t", "u", "w"),
        rho=rho, drho=drho,
        feasible=NestedRegion(("v", "x", "y", "z", "s", "t", "u", "w"), (),
                              "eight-dimensional positivity body"),
        separable=SeparableSpec("all"),
    )


def rho_p_family() -> DensityFamily:
    """Four-parameter section of rho_Q with s = t = u = w = 0."""
    full = rho_q_family()

    def rho(theta):
        v, x, y, z = theta
        return full.rho(np.array([v, x, y, z, 0, 0, 0, 0]))

    def drho(theta):
        return full.drho(np.zeros(8))[:4]

    region = NestedRegion(
        names=("v", "x", "y", "z"),
        limits=(),
        description="v in (0,1], x^2 + y^2 + z^2 <= v^2",
    )
    return DensityFamily(
        id="rho_p", dims=(3,), k=4, param_names=("v", "x", "y", "z"),
        rho=rho, drho=drho, feasible=region, separable=SeparableSpec("all"),
    )


def family_bloch2() -> DensityFamily:
    """Single qubit in Bloch coordinates."""
    basis = [0.5 * p for p in PAULIS]
    rho, drho = _affine(np.eye(2, dtype=complex) / 2, basis, (2,))
    return DensityFamily(
        id="bloch2", dims=(2,), k=3, param_names=("x", "y", "z"),
        rho=rho, drho=drho,
        feasible=NestedRegion(("x", "y", "z"), (), "unit ball x^2+y^2+z^2 <= 1"),
        separable=SeparableSpec("all"),
    )


def pauli15_family() -> DensityFamily:
    """Full fifteen-parameter two-qubit family in the Pauli product basis.

    Parameter order: a_x a_y a_z, b_x b_y b_z, then zeta_ij row-major.
    This is the ambient family for conditioned (restrict-after) tensors.
    """
    i2 = np.eye(2, dtype=complex)
    basis = [kron(p, i2) for p in PAULIS]
    basis += [kron(i2, p) for p in PAULIS]
    basis += [kron(PAULIS[i], PAULIS[j]) for i in range(3) for j in range(3)]
    rho, drho = _affine(np.eye(4, dtype=complex) / 4, basis, (2, 2))
    names = tuple(f"a_{c}" for c in "xyz") + tuple(f"b_{c}" for c in "xyz") + tuple(
        f"zeta_{a}{b}" for a in "xyz" for b in "xyz")
    return DensityFamily(
        id="pauli15", dims=(2, 2), k=15, param_names=names,
        rho=rho, drho=drho,
        feasible=NestedRegion(names, (), "fifteen-dimensional positivity body"),
        separable=SeparableSpec("ppt"),
    )


_BUILDERS = (
    family_s1_equal_intra,
    family_s2_two_pos_one_neg,
    family_s3_equal_inter,
    family_s4_intra_vs_inter,
    family_s5_all_nine,
    family_s6_all_fifteen,
    family_s7_antisym_inter,
    family_werner_qq,
    family_twoparam_intra,
    family_threeparam_intra,
    family_diag4,
    family_diag4_unitary,
    family_werner_qutrit,
    family_sixlevel,
    family_werner_qubit_qutrit,
    rho_q_family,
    rho_p_family,
    family_bloch2,
)


def registry() -> dict[str, DensityFamily]:
    """All catalog families keyed by id (excludes the ambient pauli15)."""
    fams = [build() for build in _BUILDERS]
    return {f.id: f for f in fams}


def get_family(fam_id: str) -> DensityFamily:
    fams = registry()
    if fam_id not in fams:
        raise UsageError(f"unknown family id '{fam_id}'")
    return fams[fam_id]


def min_eig_along(fam: DensityFamily, theta_of_t: Callable[[float], np.ndarray]):
    """Minimum eigenvalue of rho along a parameterized line, as a function."""
    def g(t: float) -> float:
        return fam.rho(theta_of_t(t)).min_eigenvalue()
    return g


def feasible_endpoint(fam: DensityFamily, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Bisect the minimum-eigenvalue root of a one-parameter family in [lo, hi]."""
    if fam.k != 1:
        raise UsageError("feasible_endpoint works on one-parameter families")
    g = min_eig_along(fam, lambda t: np.array([t]))
    return find_root_bisect(g, lo, hi, tol)
