"""Closed-form equilibria of the rescaled model and their existence conditions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Frame, OriginalParams, RescaledParams, StateVector, rescaled_field

#: populations at or below this are treated as absent
POSITIVITY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class EquilibriumSet:
    E0: StateVector
    E1: StateVector
    E2: StateVector | None = None
    theta: float | None = None
    E_star: StateVector | None = None
    # positive root on the rejected branch of the x* quadratic, if any
    alternate: StateVector | None = None

    @property
    def nonunique(self) -> bool:
        return self.alternate is not None

    def present(self) -> dict[str, StateVector]:
        found = {"E0": self.E0, "E1": self.E1}
        if self.E2 is not None:
            found["E2"] = self.E2
        if self.E_star is not None:
            found["E_star"] = self.E_star
        return found


@dataclass(frozen=True)
class ExistenceThresholds:
    t1: float
    t2: float | None
    t3: float | None
    prey_premise: bool  # v1 > a1
    top_premise: bool  # v3 > d3 * c3
    a0: float

    @property
    def verdict(self) -> bool:
        if not (self.prey_premise and self.top_premise):
            return False
        if self.t2 is None or self.t3 is None:
            return False
        return self.a0 > max(self.t1, self.t2, self.t3)


def _theta(rp: RescaledParams) -> float | None:
    if rp.c <= rp.b:
        return None
    return rp.a * rp.b / (rp.c - rp.b)


def boundary_equilibria(rp: RescaledParams) -> EquilibriumSet:
    e0 = StateVector(0.0, 0.0, 0.0, Frame.RESCALED)
    e1 = StateVector(1.0, 0.0, 0.0, Frame.RESCALED)
    theta = _theta(rp)
    if theta is None or not (POSITIVITY_THRESHOLD < theta < 1.0):
        return EquilibriumSet(e0, e1, theta=theta)
    e2 = StateVector(theta, (1.0 - theta) * (rp.a + theta), 0.0, Frame.RESCALED)
    return EquilibriumSet(e0, e1, e2, theta)


def _interior_branches(rp: RescaledParams) -> tuple[StateVector | None, StateVector | None]:
    a, b, c, d = rp.a, rp.b, rp.c, rp.d
    y_star = rp.q / rp.p - rp.r
    radicand = ((1.0 + a) / 2.0) ** 2 - y_star
    if y_star <= POSITIVITY_THRESHOLD or radicand < 0:
        return None, None

    def build(x_star: float) -> StateVector | None:
        if x_star <= POSITIVITY_THRESHOLD:
            return None
        z_star = (-b + c * x_star / (a + x_star)) * (y_star + d)
        if z_star <= POSITIVITY_THRESHOLD:
            return None
        return StateVector(x_star, y_star, z_star, Frame.RESCALED)

    root = math.sqrt(radicand)
    return build((1.0 - a) / 2.0 + root), build((1.0 - a) / 2.0 - root)


def interior_equilibrium(rp: RescaledParams) -> StateVector | None:
    """Coexistence equilibrium on the + branch, or None if it is not strictly positive."""
    return _interior_branches(rp)[0]


def equilibria(rp: RescaledParams) -> EquilibriumSet:
    boundary = boundary_equilibria(rp)
    plus, minus = _interior_branches(rp)
    return EquilibriumSet(
        boundary.E0,
        boundary.E1,
        boundary.E2,
        boundary.theta,
        E_star=plus,
        alternate=minus if plus is not None and minus != plus else None,
    )


def interior_existence_thresholds(op: OriginalParams) -> ExistenceThresholds:
    """Lower bounds on a0 for a positive interior equilibrium, in original parameters."""
    b0d0 = op.b0 * op.d0
    surplus = op.v3 / op.c3 - op.d3
    t2 = 2.0 * math.sqrt(op.b0 * op.v0 * surplus) - b0d0 if surplus >= 0 else None
    if op.v1 != op.a1:
        t3 = b0d0 * op.a1 / (op.v1 - op.a1) + op.v0 / (op.d0 * op.v1) * surplus * (op.v1 - op.a1)
    else:
        t3 = None
    return ExistenceThresholds(
        t1=b0d0,
        t2=t2,
        t3=t3,
        prey_premise=op.v1 > op.a1,
        top_premise=op.v3 > op.d3 * op.c3,
        a0=op.a0,
    )


def residual(rp: RescaledParams, s: StateVector) -> float:
    s.expect(Frame.RESCALED)
    return float(np.linalg.norm(rescaled_field(rp)(s.as_array())))
