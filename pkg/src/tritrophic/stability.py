"""Local and global stability of the coexistence equilibrium.

Local stability of a Caputo system of order m at a fixed point requires every
eigenvalue of the Jacobian to satisfy |arg(xi)| > m*pi/2. The coefficient
tests in :func:`classify_local` are sufficient conditions only; the direct
argument test in :func:`eigen_arg_check` is authoritative.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .equilibria import interior_equilibrium
from .fode import check_order
from .model import Frame, RescaledParams, StateVector

#: |A1*A2 - A3| below this counts as the equality case
EQUALITY_TOL = 1e-9
#: roots smaller than this (relative to coefficient scale) count as zero
ZERO_ROOT_TOL = 1e-12


def jacobian_at(rp: RescaledParams, s: StateVector) -> np.ndarray:
    """Analytic Jacobian of the rescaled vector field at ``s``."""
    s.expect(Frame.RESCALED)
    a, b, c, d, p, q, r = rp.a, rp.b, rp.c, rp.d, rp.p, rp.q, rp.r
    x, y, z = s.x, s.y, s.z
    xa = x + a
    yd = y + d
    yr = y + r
    return np.array(
        [
            [1.0 - 2.0 * x - a * y / xa**2, -x / xa, 0.0],
            [a * c * y / xa**2, c * x / xa - b - d * z / yd**2, -y / yd],
            [0.0, q * z * z / yr**2, 2.0 * p * z - 2.0 * q * z / yr],
        ]
    )


def discriminant(A1: float, A2: float, A3: float) -> float:
    return 18 * A1 * A2 * A3 + (A1 * A2) ** 2 - 4 * A3 * A1**3 - 4 * A2**3 - 27 * A3**2


@dataclass(frozen=True)
class CharPoly:
    """Monic cubic xi^3 + A1 xi^2 + A2 xi + A3."""

    A1: float
    A2: float
    A3: float

    @property
    def discriminant(self) -> float:
        return discriminant(self.A1, self.A2, self.A3)

    @property
    def hurwitz_gap(self) -> float:
        return self.A1 * self.A2 - self.A3

    def __call__(self, xi):
        return ((xi + self.A1) * xi + self.A2) * xi + self.A3

    def roots(self) -> np.ndarray:
        return cubic_roots(self.A1, self.A2, self.A3)


def charpoly_coeffs(J: np.ndarray) -> CharPoly:
    J = np.asarray(J, dtype=float)
    minors = (
        J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
        + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1]
    )
    return CharPoly(A1=-float(np.trace(J)), A2=float(minors), A3=-float(np.linalg.det(J)))


def _polish(A1: float, A2: float, A3: float, xi: complex, sweeps: int = 2) -> complex:
    """Newton steps on the cubic, each kept only if it lowers the residual.

    The guard matters near multiple roots, where f' vanishes and a raw step
    can throw the root far away.
    """
    f = ((xi + A1) * xi + A2) * xi + A3
    for _ in range(sweeps):
        df = (3 * xi + 2 * A1) * xi + A2
        if df == 0:
            break
        candidate = xi - f / df
        f_new = ((candidate + A1) * candidate + A2) * candidate + A3
        if not abs(f_new) < abs(f):
            break
        xi, f = candidate, f_new
    return xi


def cubic_roots(A1: float, A2: float, A3: float) -> np.ndarray:
    """Roots of xi^3 + A1 xi^2 + A2 xi + A3 by the closed form.

    Trigonometric form when the discriminant is positive (three real roots),
    otherwise Cardano's real root followed by deflation to a quadratic.
    """
    shift = -A1 / 3.0
    p = A2 - A1 * A1 / 3.0
    q = 2.0 * A1**3 / 27.0 - A1 * A2 / 3.0 + A3

    if discriminant(A1, A2, A3) > 0 and p < 0:
        rad = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * rad)  # cos(3 phi)
        phi = math.acos(max(-1.0, min(1.0, arg))) / 3.0
        roots = [rad * math.cos(phi - 2.0 * math.pi * k / 3.0) + shift for k in range(3)]
        roots = [_polish(A1, A2, A3, complex(t)).real for t in roots]
        return np.sort(np.array(roots, dtype=complex))

    s = math.sqrt(max(q * q / 4.0 + p**3 / 27.0, 0.0))
    # pick the cube root away from cancellation
    u = np.cbrt(-q / 2.0 - math.copysign(s, q) if q != 0 else s)
    t = u - p / (3.0 * u) if u != 0 else 0.0
    real_root = _polish(A1, A2, A3, complex(t + shift)).real

    B = A1 + real_root
    C = A2 + real_root * B
    sq = cmath.sqrt(B * B - 4.0 * C)
    # stable quadratic formula
    w = -0.5 * (B + (sq if B >= 0 else -sq))
    pair = (w, C / w) if w != 0 else (0j, 0j)
    pair = tuple(_polish(A1, A2, A3, complex(v)) for v in pair)
    if abs(pair[0].imag) > 0 and math.isclose(pair[0].real, pair[1].real, rel_tol=1e-9, abs_tol=1e-15):
        # enforce exact conjugacy
        re, im = pair[0].real, abs(pair[0].imag)
        pair = (complex(re, im), complex(re, -im))
    return np.array([real_root + 0j, *pair])


class Clause(str, enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class LocalClassification:
    clause: Clause
    stable: bool | None  # None when no clause decides


def classify_local(cp: CharPoly, m: float) -> LocalClassification:
    """Sufficient coefficient conditions for (in)stability at order ``m``."""
    m = check_order(m)
    A1, A2, A3 = cp.A1, cp.A2, cp.A3
    D = cp.discriminant
    if D > 0 and A1 > 0 and A3 > 0 and cp.hurwitz_gap > 0:
        return LocalClassification(Clause.I, True)
    if D < 0:
        if A1 >= 0 and A2 >= 0 and A3 > 0 and m < 2.0 / 3.0:
            return LocalClassification(Clause.II, True)
        if A1 < 0 and A2 < 0 and m > 2.0 / 3.0:
            return LocalClassification(Clause.III, False)
        if A1 > 0 and A2 > 0 and abs(cp.hurwitz_gap) <= EQUALITY_TOL and m < 1.0:
            return LocalClassification(Clause.IV, True)
    return LocalClassification(Clause.INDETERMINATE, None)


@dataclass(frozen=True)
class StabilityReport:
    charpoly: CharPoly
    eigenvalues: np.ndarray = field(repr=False)
    m: float
    clause: Clause
    clause_verdict: bool | None
    min_arg: float
    critical_order: float
    verdict: str  # "stable" | "unstable" | "marginal"

    @property
    def stable(self) -> bool:
        return self.verdict == "stable"


def eigen_arg_check(J: np.ndarray, m: float) -> StabilityReport:
    """Direct sector test |arg(xi_i)| > m*pi/2 on the eigenvalues of ``J``."""
    m = check_order(m)
    cp = charpoly_coeffs(J)
    eig = cp.roots()
    scale = max(1.0, abs(cp.A1), abs(cp.A2), abs(cp.A3))
    classification = classify_local(cp, m)
    if np.any(np.abs(eig) <= ZERO_ROOT_TOL * scale):
        return StabilityReport(cp, eig, m, classification.clause, classification.stable, 0.0, 0.0, "marginal")
    min_arg = float(np.min(np.abs(np.angle(eig))))
    critical = min(1.0, max(0.0, 2.0 * min_arg / math.pi))
    verdict = "stable" if min_arg > m * math.pi / 2.0 else "unstable"
    return StabilityReport(cp, eig, m, classification.clause, classification.stable, min_arg, critical, verdict)


@dataclass(frozen=True)
class GlobalConditions:
    name: str
    alpha: float
    bracket: float  # the constant c + c/4b (+ d) inside the prey-predator terms
    c1: float
    c2: float
    c3: float

    @property
    def values(self) -> tuple[float, float, float]:
        return self.c1, self.c2, self.c3

    @property
    def verdict(self) -> bool:
        return self.c1 < 0 and self.c2 < 0 and self.c3 < 0


@dataclass(frozen=True)
class GlobalReport:
    c1: float
    variants: dict[str, GlobalConditions]

    @property
    def strict(self) -> GlobalConditions:
        return self.variants["strict"]

    @property
    def alternate(self) -> GlobalConditions:
        return self.variants["alternate"]


def _global_conditions(name, rp, e, alpha, bracket) -> GlobalConditions:
    a, b, c, d, q, r = rp.a, rp.b, rp.c, rp.d, rp.q, rp.r
    x, y, z = e.x, e.y, e.z
    weight = (a + x) / (a * c)
    c1 = y / (a * (a + x)) - 1.0
    c2 = weight * (z / (d * (d + y)) - 1.0 / (2.0 * bracket)) + q / (2.0 * b * r * alpha)
    c3 = q / (b * r * alpha) - weight / bracket
    return GlobalConditions(name, alpha, bracket, c1, c2, c3)


def global_stability_check(rp: RescaledParams, e: StateVector) -> GlobalReport:
    """Sign conditions for the Volterra-type Lyapunov function, under two readings.

    ``strict``: alpha = 1/(b^2 (c + c/4b + r)) with bracket c + c/4b + d.
    ``alternate``: alpha = 1/(b^2 (c + c/4b + d)) with bracket c + c/4b.
    """
    e.expect(Frame.RESCALED)
    a, b, c, d, r = rp.a, rp.b, rp.c, rp.d, rp.r
    base = c + c / (4.0 * b)
    strict = _global_conditions("strict", rp, e, 1.0 / (b * b * (base + r)), base + d)
    alternate = _global_conditions("alternate", rp, e, 1.0 / (b * b * (base + d)), base)
    return GlobalReport(strict.c1, {"strict": strict, "alternate": alternate})


def lyapunov_value(rp: RescaledParams, e: StateVector, s: StateVector) -> float:
    """Weighted sum of u - u* - u* ln(u/u*) over the three populations."""
    e.expect(Frame.RESCALED)
    s.expect(Frame.RESCALED)
    if min(s.x, s.y, s.z) <= 0:
        raise ValueError("Lyapunov function is defined only for strictly positive states")
    return float(lyapunov_values(rp, e, s.as_array()))


def lyapunov_values(rp: RescaledParams, e: StateVector, states: np.ndarray) -> np.ndarray:
    """Vectorised Lyapunov function over an array of rescaled states (..., 3)."""
    states = np.asarray(states, dtype=float)
    if np.any(states <= 0):
        raise ValueError("Lyapunov function is defined only for strictly positive states")
    star = e.as_array()
    weights = np.array([1.0, (rp.a + e.x) / (rp.a * rp.c), e.y + rp.r])
    terms = states - star - star * np.log(states / star)
    return terms @ weights


def local_stability(rp: RescaledParams, m: float) -> StabilityReport | None:
    """Stability report at the interior equilibrium, or None if it does not exist."""
    e = interior_equilibrium(rp)
    if e is None:
        return None
    return eigen_arg_check(jacobian_at(rp, e), m)
