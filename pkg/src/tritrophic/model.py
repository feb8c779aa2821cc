"""Prey / intermediate predator / top predator food chain in two coordinate frames.

The original frame carries the twelve biological rates and half-saturation
constants. The rescaled frame is the nondimensional form with seven
parameters; it is where equilibria and stability conditions are evaluated.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import astuple, dataclass, fields

import numpy as np


class Frame(str, enum.Enum):
    ORIGINAL = "original"
    RESCALED = "rescaled"


class FrameError(ValueError):
    """A state was passed to an operation expecting the other frame."""


def _require_positive(obj) -> None:
    for f in fields(obj):
        value = getattr(obj, f.name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ValueError(f"parameter {f.name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class OriginalParams:
    a0: float
    b0: float
    v0: float
    d0: float
    a1: float
    v1: float
    d1: float
    v2: float
    d2: float
    c3: float
    v3: float
    d3: float

    def __post_init__(self):
        _require_positive(self)

    def replace(self, **changes) -> "OriginalParams":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return OriginalParams(**values)


@dataclass(frozen=True)
class RescaledParams:
    a: float
    b: float
    c: float
    d: float
    p: float
    q: float
    r: float

    def __post_init__(self):
        _require_positive(self)


@dataclass(frozen=True)
class StateVector:
    x: float
    y: float
    z: float
    frame: Frame = Frame.ORIGINAL

    def __post_init__(self):
        object.__setattr__(self, "frame", Frame(self.frame))
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"state component {name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def expect(self, frame: Frame) -> "StateVector":
        if self.frame is not frame:
            raise FrameError(f"expected a state in the {frame.value} frame, got {self.frame.value}")
        return self


ORIGINAL_KEYS = tuple(f.name for f in fields(OriginalParams))
RESCALED_KEYS = tuple(f.name for f in fields(RescaledParams))


def original_field(op: OriginalParams):
    """Vector field of the dimensional model as a function of an array (X, Y, Z)."""
    a0, b0, v0, d0, a1, v1, d1, v2, d2, c3, v3, d3 = astuple(op)

    def rhs(s: np.ndarray) -> np.ndarray:
        X, Y, Z = s
        return np.array(
            [
                a0 * X - b0 * X * X - v0 * X * Y / (d0 + X),
                -a1 * Y + v1 * X * Y / (d1 + X) - v2 * Y * Z / (d2 + Y),
                c3 * Z * Z - v3 * Z * Z / (d3 + Y),
            ]
        )

    return rhs


def rescaled_field(rp: RescaledParams):
    """Vector field of the nondimensional model as a function of an array (x, y, z)."""
    a, b, c, d, p, q, r = astuple(rp)

    def rhs(s: np.ndarray) -> np.ndarray:
        x, y, z = s
        return np.array(
            [
                x * (1.0 - x) - x * y / (x + a),
                c * x * y / (x + a) - b * y - y * z / (y + d),
                p * z * z - q * z * z / (y + r),
            ]
        )

    return rhs


def rhs_original(op: OriginalParams, s: StateVector) -> tuple[float, float, float]:
    s.expect(Frame.ORIGINAL)
    return tuple(float(v) for v in original_field(op)(s.as_array()))


def rhs_rescaled(rp: RescaledParams, s: StateVector) -> tuple[float, float, float]:
    s.expect(Frame.RESCALED)
    return tuple(float(v) for v in rescaled_field(rp)(s.as_array()))


def rescale_params(op: OriginalParams) -> RescaledParams:
    """Nondimensional parameters. The prey-uptake saturation d1 is assumed equal to d0."""
    if not math.isclose(op.d0, op.d1, rel_tol=1e-12):
        warnings.warn(
            f"rescaled model assumes d1 == d0 (got d0={op.d0}, d1={op.d1}); d1 is ignored",
            stacklevel=2,
        )
    a0, b0, v0 = op.a0, op.b0, op.v0
    return RescaledParams(
        a=b0 * op.d0 / a0,
        b=op.a1 / a0,
        c=op.v1 / a0,
        d=op.d2 * v0 * b0 / a0**2,
        p=op.c3 * a0**2 / (b0 * v0 * op.v2),
        q=op.v3 / op.v2,
        r=op.d3 * v0 * b0 / a0**2,
    )


def state_scales(op: OriginalParams) -> np.ndarray:
    """Factors mapping original populations to rescaled ones, componentwise."""
    a0, b0, v0, v2 = op.a0, op.b0, op.v0, op.v2
    return np.array([b0 / a0, b0 * v0 / a0**2, b0 * v0 * v2 / a0**3])


def rescale_state(op: OriginalParams, s: StateVector) -> StateVector:
    s.expect(Frame.ORIGINAL)
    x, y, z = s.as_array() * state_scales(op)
    return StateVector(x, y, z, Frame.RESCALED)


def unscale_state(op: OriginalParams, s: StateVector) -> StateVector:
    s.expect(Frame.RESCALED)
    X, Y, Z = s.as_array() / state_scales(op)
    return StateVector(X, Y, Z, Frame.ORIGINAL)


@dataclass(frozen=True)
class InvarianceReport:
    condition_holds: bool
    lhs: float
    q_over_p: float
    alpha: float
    alpha_with_d: float
    M: float | None
    x_bound: float
    xy_bound: float
    xyz_bound: float | None
    c: float

    def contains(self, s: StateVector, tol: float = 0.0) -> bool:
        """True if ``s`` satisfies the three plane constraints of the trapping set."""
        if self.xyz_bound is None:
            raise ValueError("trapping set undefined: invariance condition fails")
        s.expect(Frame.RESCALED)
        x, y, z = s.x, s.y, s.z
        xy = x + y / self.c
        return (
            x <= self.x_bound + tol
            and xy <= self.xy_bound + tol
            and xy + self.alpha * z <= self.xyz_bound + tol
        )


def invariance_check(rp: RescaledParams) -> InvarianceReport:
    """Evaluate c + c/4b + r < q/p and the trapping-set constants alpha and M."""
    a, b, c, d, p, q, r = astuple(rp)
    lhs = c + c / (4 * b) + r
    holds = lhs < q / p
    alpha = 1.0 / (b * b * lhs)
    alpha_d = 1.0 / (b * b * (c + c / (4 * b) + d))
    M = 1.0 / (4.0 * (q - lhs * p)) if holds else None
    xy_bound = 1.0 + 1.0 / (4 * b)
    return InvarianceReport(
        condition_holds=holds,
        lhs=lhs,
        q_over_p=q / p,
        alpha=alpha,
        alpha_with_d=alpha_d,
        M=M,
        x_bound=1.0,
        xy_bound=xy_bound,
        xyz_bound=xy_bound + M / b if holds else None,
        c=c,
    )
