"""Catalog of the closed-form priors, marginals and tensor formulas.

These are the printed formulas the metric engines are validated against,
and the primary definition of the families that have no density-matrix
map here (Tsallis and Rains-Smolin).  Each catalog entry records how it
relates to the engine volume element:

* ``exact``        -- equals the engine output pointwise;
* ``normalized``   -- equals engine output divided by its feasible mass;
* ``proportional`` -- equals the engine output up to a constant;
* ``none``         -- no engine counterpart (conditional or external forms).

Transcription notes.  The q=1 maximum-entropy prior is printed with the
radical (sigma^2 - 8 b^4); only the exponent-transposed radical
(sigma^4 - 8 b^2) is normalizable over the stated domain and reproduces
the reported separability probability, so the corrected form is what the
scenario uses while the literal transcription is kept alongside.  See the
q=1 helpers below and the test suite for the evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)


# ---------------------------------------------------------------------------
# three-level machinery (the conditional/restricted pair and its marginals)

def conditional_8d_prior(v, x, y, z):
    """Signed conditional volume element of the full 8x8 tensor on the
    (v, x, y, z) section; negative over the feasible body."""
    r2 = x * x + y * y + z * z
    return 1.0 / (64 * v * np.sqrt(1 - v) * np.sqrt(v * v - r2)
                  * (r2 - (v - 2) ** 2))


def restricted_4d_prior(v, x, y, z):
    """Volume element of the restricted four-parameter section."""
    r2 = x * x + y * y + z * z
    return 1.0 / (16 * v * np.sqrt(1 - v) * np.sqrt(v * v - r2))


def complement_factor(v, x, y, z):
    """The factor relating the two: f = 1/(4(x^2+y^2+z^2-(v-2)^2)), negative."""
    r2 = x * x + y * y + z * z
    return 1.0 / (4 * (r2 - (v - 2) ** 2))


def restricted_metric_matrix(v, x, y, z):
    """4x4 metric of the restricted section in (v, x, y, z) order."""
    r2 = x * x + y * y + z * z
    m = np.array([
        [(v - r2) / (1 - v), -x, -y, -z],
        [-x, (v * v - y * y - z * z) / v, x * y / v, x * z / v],
        [-y, x * y / v, (v * v - x * x - z * z) / v, y * z / v],
        [-z, x * z / v, y * z / v, (v * v - x * x - y * y) / v],
    ])
    return m / (4 * (v * v - r2))


def restricted_metric_matrix_variant(v, x, y, z):
    """Sign-variant companion of the restricted 4x4 metric matrix.

    All four diagonal entries are negated and the couplings within the
    (x, y, z) block flip sign while the first row keeps its signs; this is
    the conjugation -D M D with D = diag(1,-1,-1,-1), so the determinant
    equals that of ``restricted_metric_matrix`` identically.  (The source
    prints this companion with three of those sign flips dropped, which
    contradicts both its surrounding text and the determinant equality it
    asserts; see the decisions ledger.)
    """
    r2 = x * x + y * y + z * z
    m = np.array([
        [(r2 - v) / (1 - v), -x, -y, -z],
        [-x, (y * y + z * z - v * v) / v, -x * y / v, -x * z / v],
        [-y, -x * y / v, (x * x + z * z - v * v) / v, -y * z / v],
        [-z, -x * z / v, -y * z / v, (x * x + y * y - v * v) / v],
    ])
    return m / (4 * (v * v - r2))


def bloch_metric_matrix(x, y, z):
    """Single-qubit Bures metric in Bloch coordinates."""
    r2 = x * x + y * y + z * z
    m = np.array([
        [1 - y * y - z * z, x * y, x * z],
        [x * y, 1 - x * x - z * z, y * z],
        [x * z, y * z, 1 - x * x - y * y],
    ])
    return m / (4 * (1 - r2))


def q_marginal(v):
    """Improper marginal of the conditional prior over v (negative valued)."""
    return (np.pi ** 2 / (64 * v)) * (-1 - 2 / np.sqrt(1 - v) + 1 / (-1 + v))


def p_marginal(v):
    """Proper marginal of the restricted prior over v: 3v/(4 sqrt(1-v))."""
    return 3 * v / (4 * np.sqrt(1 - v))


def conditional_eigenvalue_pairs(v, r):
    """The three printed eigenvalue pairs of the conditioned 8x8 tensor."""
    return (1.0 / (4 * v),
            1.0 / (4 + 2 * r - 2 * v),
            -1.0 / (2 * (r + v - 2)))


def conditional_lambda78(v, r):
    """Remaining eigenvalue pair, reading the printed expression as the
    two branches 1/(-2A +- 2 sqrt(B)); verified via the eight-fold product."""
    a = r * r + (v - 2) * v
    b = r ** 4 + v ** 4 + 2 * r * r * (2 + (v - 4) * v)
    sb = math.sqrt(b)
    return (1.0 / (-2 * a + 2 * sb), 1.0 / (-2 * a - 2 * sb))


# ---------------------------------------------------------------------------
# one- and two-parameter two-qubit priors

def conditional_s1_prior(z):
    """Restrict-after conditional prior of scenario 1 (improper)."""
    return 32768.0 / ((1 - 4 * z) ** 3 * (1 + 4 * z) ** 4.5 * np.sqrt(1 - 12 * z))


def s1_prior(z):
    return 2 * SQRT3 / np.sqrt(1 - 8 * z - 48 * z * z)


def s2_prior(z):
    return 4 * SQRT3 / (np.pi * np.sqrt(1 + 8 * z - 48 * z * z))


def s3_prior(z):
    return 8 * SQRT2 / (np.pi * np.sqrt(1 - 8 * z - 128 * z * z))


def s4_metric_value(z):
    return 12 * (3 - 20 * z) / ((4 * z - 1) * (12 * z - 1) * (1 + 20 * z))


def s4_prior(z):
    return np.sqrt(s4_metric_value(z))


def s5_prior(z):
    return 12.0 / (np.pi * np.sqrt(1 - 144 * z * z))


def s6_prior(z):
    return 2 * np.sqrt(3 - 20 * z) / np.sqrt(1 + 12 * z - 336 * z * z + 576 * z ** 3)


RAINS_SMOLIN_HALFWIDTH = math.sqrt(807599.0) / 175.0


def rains_smolin_prior(x):
    return 175.0 / (np.pi * np.sqrt(807599.0 - 30625.0 * x * x))


def werner_qq_prior(e):
    return 3 * SQRT3 / (np.pi * np.sqrt(4 + 8 * e - 12 * e * e))


def twoparam_prior(z, e):
    return 8 * SQRT2 / (np.pi * np.sqrt((1 + 4 * e) * ((1 - 4 * e) ** 2 - 64 * z * z)))


def twoparam_eta_marginal(e):
    return SQRT2 / np.sqrt(1 + 4 * e)


def threeparam_prior(z, e, k):
    f1 = -1 + 4 * z - 4 * e - 4 * k
    f2 = 1 + 4 * z + 4 * e - 4 * k
    f3 = 1 + 4 * z - 4 * e + 4 * k
    f4 = -1 + 4 * z + 4 * e + 4 * k
    return 8.0 / np.sqrt(f1 * f2 * f3 * f4)


THREEPARAM_NORMALIZATION = math.pi ** 2 / 8


def dirichlet_prior(x, y, z):
    w = 1 - x - y - z
    return 1.0 / (np.pi ** 2 * np.sqrt(x * y * z * w))


def unitary_family_prior(x, y, z):
    """Unnormalized prior of the rotated-diagonal family (w independent)."""
    w4 = 1 - x - y - z
    return np.sqrt((y - z) ** 2) / (8 * np.sqrt(x * y * z * (y + z) * w4))


UNITARY_NORMALIZATION = math.pi ** 2 / 3  # over simplex x [0, 2 pi]


def unitary_separable_halfwidth(x, y, z):
    """Separability bound on the rotation angle: w in [-u, u]."""
    w4 = 1 - x - y - z
    arg = 2 * np.sqrt(x * w4) / np.sqrt((y - z) ** 2)
    return 0.5 * np.arcsin(np.minimum(arg, 1.0))


# ---------------------------------------------------------------------------
# Tsallis maximum-entropy families

TSALLIS_B_MAX = 2 * SQRT2
TSALLIS_SEP_B_MAX_Q1 = SQRT2
TSALLIS_SEP_B_MAX_QHALF = 4 - 2 * SQRT2


def tsallis_domain_check(b, s2):
    if b < 0 or b > TSALLIS_B_MAX or s2 > 8 or s2 < 2 * SQRT2 * b:
        raise DomainError(f"(b, s2) = ({b}, {s2}) outside the feasible wedge")


def tsallis_q1_prior(b, s2):
    """Literal transcription of the printed q=1 prior (b^4 radical).

    Real only where s2 >= 8 b^4; raises DomainError elsewhere.  Kept for
    transcription-level checks; the scenario uses the corrected form.
    """
    rad1 = 8 - s2
    rad2 = s2 - 8 * b ** 4
    if rad1 < 0 or rad2 <= 0 or b < 0:
        raise DomainError(f"(b, s2) = ({b}, {s2}) outside the printed-form domain")
    return 1.0 / (np.pi * math.sqrt(rad1) * math.sqrt(rad2))


def tsallis_q1_prior_fixed(b, s2):
    """Corrected q=1 prior 1/(pi sqrt((s2^2 - 8 b^2)(8 - s2))).

    Normalizes to one over the feasible wedge 0 <= b <= 2 sqrt(2),
    2 sqrt(2) b <= s2 <= 8 and reproduces the reported separability
    probability; it is the Bures volume element of the Bell-diagonal
    maximum-entropy family in the (expectation, second-moment) chart.
    """
    return 1.0 / (np.pi * np.sqrt((s2 * s2 - 8 * b * b) * (8 - s2)))


def tsallis_q1_sep_s2_max(b):
    return 8 - 2 * SQRT2 * b


def tsallis_qhalf_prior(b, s2):
    return 32.0 / (np.pi * (32 + 4 * b * b + (s2 - 8) * s2) ** 1.5)


def tsallis_qhalf_sep_s2_max(b):
    return 8 + 2 * SQRT2 * b - 2 * SQRT2 * np.sqrt(b * (4 * SQRT2 + b))


# ---------------------------------------------------------------------------
# Werner ratio priors (conditional forms printed for the larger systems)

def werner_qutrit_ratio(e):
    """Ratio whose square root is the printed two-qutrit Werner prior."""
    num = -16 * (2 + 7 * e) * (
        496 + 14384 * e + 179472 * e ** 2 + 1269568 * e ** 3 + 5676488 * e ** 4
        + 16753596 * e ** 5 + 31419646 * e ** 6 + 31863023 * e ** 7
        + 14859999 * e ** 8)
    den = 3 * (-1 + e) ** 5 * (1 + 8 * e) * (31 + 161 * e) * (
        31 + 603 * e + 3993 * e ** 2 + 8981 * e ** 3)
    return num / den


def werner_qutrit_prior(e):
    return np.sqrt(werner_qutrit_ratio(e))


def werner_qubit_qutrit_ratio(e):
    num = 10 * (1 + 2 * e) * (26 + 286 * e + 1236 * e ** 2 + 2506 * e ** 3
                              + 2021 * e ** 4)
    den = (-1 + e) ** 2 * (1 + 5 * e) * (13 + 32 * e) * (
        13 + 126 * e + 429 * e ** 2 + 512 * e ** 3)
    return num / den


def werner_qubit_qutrit_prior(e):
    return np.sqrt(werner_qubit_qutrit_ratio(e))


# ---------------------------------------------------------------------------
# catalog

@dataclass(frozen=True)
class ClosedFormPrior:
    id: str
    arity: int
    fn: Callable
    domain: str
    kind: str           # 'normalized' | 'unnormalized' | 'improper'
    match: str          # relation to the engine volume element
    formula: str

    def evaluate(self, *args):
        val = self.fn(*args)
        arr = np.asarray(val, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"{self.id}: evaluation outside domain {self.domain}")
        return val


def catalog() -> list[ClosedFormPrior]:
    """Every closed-form prior/marginal the package transcribes."""
    return [
        ClosedFormPrior("conditional_8d", 4, conditional_8d_prior,
                        "interior of the rho_P body", "improper", "none",
                        "1/(64 v sqrt(1-v) sqrt(v^2-r^2) (r^2-(v-2)^2))"),
        ClosedFormPrior("restricted_4d", 4, restricted_4d_prior,
                        "interior of the rho_P body", "unnormalized", "exact",
                        "1/(16 v sqrt(1-v) sqrt(v^2-r^2))"),
        ClosedFormPrior("q_marginal", 1, q_marginal, "0 < v < 1",
                        "improper", "none",
                        "pi^2/(64 v) (-1 - 2/sqrt(1-v) + 1/(v-1))"),
        ClosedFormPrior("p_marginal", 1, p_marginal, "0 <= v < 1",
                        "normalized", "none", "3 v/(4 sqrt(1-v))"),
        ClosedFormPrior("conditional_s1", 1, conditional_s1_prior,
                        "-1/4 < z < 1/12", "improper", "none",
                        "32768/((1-4z)^3 (1+4z)^(9/2) sqrt(1-12z))"),
        ClosedFormPrior("s1", 1, s1_prior, "-1/4 < z < 1/12",
                        "unnormalized", "exact", "2 sqrt(3)/sqrt(1-8z-48z^2)"),
        ClosedFormPrior("s2", 1, s2_prior, "-1/12 < z < 1/4",
                        "normalized", "normalized", "4 sqrt(3)/(pi sqrt(1+8z-48z^2))"),
        ClosedFormPrior("s3", 1, s3_prior, "-1/8 < z < 1/16",
                        "normalized", "normalized", "8 sqrt(2)/(pi sqrt(1-8z-128z^2))"),
        ClosedFormPrior("s4", 1, s4_prior, "-1/20 < z < 1/12",
                        "unnormalized", "exact",
                        "sqrt(12 (3-20z)/((4z-1)(12z-1)(1+20z)))"),
        ClosedFormPrior("s5", 1, s5_prior, "-1/12 < z < 1/12",
                        "normalized", "normalized", "12/(pi sqrt(1-144 z^2))"),
        ClosedFormPrior("s6", 1, s6_prior, "-0.0386751 < z < 1/12",
                        "unnormalized", "proportional",
                        "2 sqrt(3-20z)/sqrt(1+12z-336z^2+576z^3)"),
        ClosedFormPrior("rains_smolin", 1, rains_smolin_prior,
                        "|x| < sqrt(807599)/175", "normalized", "none",
                        "175/(pi sqrt(807599 - 30625 x^2))"),
        ClosedFormPrior("werner_qq", 1, werner_qq_prior, "0 <= e < 1",
                        "normalized", "normalized",
                        "3 sqrt(3)/(pi sqrt(4+8e-12e^2))"),
        ClosedFormPrior("twoparam", 2, twoparam_prior,
                        "feasibility triangle", "normalized", "normalized",
                        "8 sqrt(2)/(pi sqrt((1+4 eta)((1-4 eta)^2 - 64 zeta^2)))"),
        ClosedFormPrior("twoparam_eta_marginal", 1, twoparam_eta_marginal,
                        "-1/4 < eta < 1/4", "normalized", "none",
                        "sqrt(2)/sqrt(1+4 eta)"),
        ClosedFormPrior("tsallis_q1_printed", 2, tsallis_q1_prior,
                        "8 b^4 < s2 < 8", "normalized", "none",
                        "1/(pi sqrt(8-s2) sqrt(s2-8 b^4))"),
        ClosedFormPrior("tsallis_q1", 2, tsallis_q1_prior_fixed,
                        "0 <= b <= 2 sqrt2, 2 sqrt2 b <= s2 <= 8",
                        "normalized", "none",
                        "1/(pi sqrt((s2^2-8 b^2)(8-s2)))"),
        ClosedFormPrior("tsallis_qhalf", 2, tsallis_qhalf_prior,
                        "0 <= b <= 2 sqrt2, 2 sqrt2 b <= s2 <= 8",
                        "normalized", "none",
                        "32/(pi (32+4b^2+(s2-8) s2)^(3/2))"),
        ClosedFormPrior("threeparam", 3, threeparam_prior,
                        "intra-correlation tetrahedron", "unnormalized", "exact",
                        "8/sqrt((-1+4z-4e-4k)(1+4z+4e-4k)(1+4z-4e+4k)(-1+4z+4e+4k))"),
        ClosedFormPrior("dirichlet", 3, dirichlet_prior,
                        "probability simplex", "normalized", "normalized",
                        "1/(pi^2 sqrt(x y z (1-x-y-z)))"),
        ClosedFormPrior("unitary_family", 3, unitary_family_prior,
                        "probability simplex", "unnormalized", "exact",
                        "sqrt((y-z)^2)/(8 sqrt(x y z (y+z)(1-x-y-z)))"),
        ClosedFormPrior("werner_qutrit", 1, werner_qutrit_prior,
                        "0 <= e < 1", "improper", "none",
                        "sqrt of the degree-9/degree-10 polynomial ratio"),
        ClosedFormPrior("werner_qubit_qutrit", 1, werner_qubit_qutrit_prior,
                        "0 <= e < 1", "improper", "none",
                        "sqrt of the degree-5/degree-7 polynomial ratio"),
    ]


def catalog_entry(entry_id: str) -> ClosedFormPrior:
    for entry in catalog():
        if entry.id == entry_id:
            return entry
    raise KeyError(entry_id)
