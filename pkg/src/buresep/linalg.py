"""Dense complex linear algebra for small density matrices.

Matrices are plain complex numpy arrays.  The helpers here add the
validation layers the rest of the package relies on: Hermiticity checks,
eigendecomposition with orthonormality guarantees, partial transpose /
partial trace over a declared bipartite factorization, and the Pauli
product-basis construction of two-qubit states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericalError, UsageError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError("kron expects square matrices")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise UsageError("kron expects square matrices")
    return np.kron(a, b)


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def require_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError("expected a square matrix")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise UsageError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return m


class Spectrum(NamedTuple):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""

    values: np.ndarray
    vectors: np.ndarray  # orthonormal columns


def herm_eig(h: np.ndarray, tol: float = HERMITICITY_TOL) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending eigenvalues and orthonormal eigenvector columns.
    Raises ``NumericalError`` if the underlying iteration fails.
    """
    h = require_hermitian(h, tol)
    try:
        values, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    return Spectrum(values, vectors)


@dataclass(eq=False)
class DensityMatrix:
    """A trace-one Hermitian matrix with optional bipartite factorization.

    ``dims`` is either ``(d,)`` for a monopartite state or ``(d_A, d_B)``.
    In ``boundary_tolerant`` mode the positivity check is skipped so that
    boundary and slightly-infeasible candidates can be constructed for
    root finding; feasibility is then the caller's concern.
    """

    mat: np.ndarray
    dims: tuple[int, ...]
    boundary_tolerant: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.mat = require_hermitian(self.mat)
        d = int(np.prod(self.dims))
        if self.mat.shape != (d, d):
            raise UsageError(
                f"dims {self.dims} inconsistent with matrix shape {self.mat.shape}"
            )
        tr = complex(np.trace(self.mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise UsageError(f"trace is {tr}, expected 1")
        if not self.boundary_tolerant:
            min_eig = float(np.linalg.eigvalsh(self.mat)[0])
            if min_eig < -PSD_TOL:
                raise DomainError(f"minimum eigenvalue {min_eig:.3e} < -{PSD_TOL}")

    @property
    def d(self) -> int:
        return self.mat.shape[0]

    def is_bipartite(self) -> bool:
        return len(self.dims) == 2

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.mat)[0])

    def spectrum(self) -> Spectrum:
        return herm_eig(self.mat)


def partial_transpose(rho: DensityMatrix | np.ndarray,
                      subsystem: str = "B",
                      dims: tuple[int, int] | None = None) -> np.ndarray:
    """Partial transpose on one factor of a bipartite state.

    Accepts a ``DensityMatrix`` carrying its factorization, or a raw matrix
    together with ``dims``.  The result is Hermitian and trace preserving.
    """
    if isinstance(rho, DensityMatrix):
        if not rho.is_bipartite():
            raise UsageError("partial transpose needs a declared (d_A, d_B) factorization")
        dims = (rho.dims[0], rho.dims[1])
        m = rho.mat
    else:
        if dims is None:
            raise UsageError("partial transpose needs a declared (d_A, d_B) factorization")
        m = np.asarray(rho, dtype=complex)
    da, db = dims
    r = m.reshape(da, db, da, db)
    if subsystem == "A":
        r = r.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        r = r.transpose(0, 3, 2, 1)
    else:
        raise UsageError("subsystem must be 'A' or 'B'")
    return r.reshape(da * db, da * db)


def partial_trace(rho: DensityMatrix | np.ndarray,
                  keep: str = "A",
                  dims: tuple[int, int] | None = None) -> np.ndarray:
    """Trace out one factor of a bipartite state, keeping the other."""
    if isinstance(rho, DensityMatrix):
        if not rho.is_bipartite():
            raise UsageError("partial trace needs a declared (d_A, d_B) factorization")
        dims = (rho.dims[0], rho.dims[1])
        m = rho.mat
    else:
        if dims is None:
            raise UsageError("partial trace needs a declared (d_A, d_B) factorization")
        m = np.asarray(rho, dtype=complex)
    da, db = dims
    r = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", r)
    if keep == "B":
        return np.einsum("ijil->jl", r)
    raise UsageError("keep must be 'A' or 'B'")


def pauli_two_qubit(a, b, zeta) -> DensityMatrix:
    """Two-qubit state from Stokes vectors and the correlation tensor.

    rho = I/4 + sum_i a_i sigma_i x I + sum_j b_j I x sigma_j
             + sum_ij zeta_ij sigma_i x sigma_j,

    so that the coefficient of each Pauli product is four times its
    expectation value.  With this convention the two-qubit Werner state of
    weight eps has zeta_ii = -eps/4.  Feasibility is not enforced here;
    the result is built boundary tolerant and checked downstream.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    if a.shape != (3,) or b.shape != (3,) or zeta.shape != (3, 3):
        raise UsageError("expected a[3], b[3], zeta[3][3]")
    rho = np.eye(4, dtype=complex) / 4.0
    i2 = np.eye(2, dtype=complex)
    for i in range(3):
        if a[i]:
            rho += a[i] * np.kron(PAULIS[i], i2)
        if b[i]:
            rho += b[i] * np.kron(i2, PAULIS[i])
        for j in range(3):
            if zeta[i, j]:
                rho += zeta[i, j] * np.kron(PAULIS[i], PAULIS[j])
    return DensityMatrix(rho, (2, 2), boundary_tolerant=True)
