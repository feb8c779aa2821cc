"""Caputo fractional integration on a uniform grid.

The main entry point is :func:`solve_caputo_pece`, the fractional
Adams-Bashforth-Moulton predictor-corrector scheme applied to the Volterra
form of the initial value problem

    y(t) = y(0) + 1/Gamma(m) * int_0^t (t - s)^(m-1) f(y(s)) ds.

:func:`reference_rk4` is the classical fourth-order Runge-Kutta method. It is
only meaningful for m = 1 and serves as an independent oracle there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model import Frame, StateVector

VectorField = Callable[[np.ndarray], np.ndarray]

#: states below zero by no more than this are clamped back onto the face
NEGATIVE_TOLERANCE = 1e-9

_GAMMA_MAX = 170.0


class SolverError(RuntimeError):
    """Integration aborted; ``time`` is the grid time of the failing step."""

    def __init__(self, message: str, time: float):
        super().__init__(f"{message} at t={time:.9g}")
        self.time = time


def gamma(x: float) -> float:
    """Euler Gamma function for 0 < x < 170."""
    x = float(x)
    if not (0.0 < x < _GAMMA_MAX):
        raise ValueError(f"gamma argument must lie in (0, {_GAMMA_MAX:g}), got {x!r}")
    return math.gamma(x)


def check_order(m: float) -> float:
    m = float(m)
    if not (0.0 < m <= 1.0):
        raise ValueError(f"fractional order must satisfy 0 < m <= 1, got {m!r}")
    return m


@dataclass(frozen=True)
class SolverOptions:
    step: float = 0.05
    t_end: float = 500.0
    memory_truncation: int | None = None
    corrector_iterations: int = 1

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ValueError(f"step must be positive, got {self.step!r}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ValueError(f"t_end must be positive, got {self.t_end!r}")
        if self.n_steps < 1:
            raise ValueError("t_end/step must give at least 2 grid points")
        if self.corrector_iterations < 1:
            raise ValueError("corrector_iterations must be >= 1")
        if self.memory_truncation is not None and self.memory_truncation < 1:
            raise ValueError("memory_truncation must be a positive count")

    @property
    def n_steps(self) -> int:
        # tolerate t_end values that are a hair under an integer multiple of step
        return int(math.floor(self.t_end / self.step + 1e-9))


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    order: float
    frame: Frame | None = None

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> StateVector:
        x, y, z = self.states[i]
        return StateVector(x, y, z, self.frame or Frame.ORIGINAL)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def predictor_weights(m: float, step: float, n: int) -> np.ndarray:
    """Rectangle-rule weights b_k for lags k = 0..n-1, scaled by 1/Gamma(m).

    Entry k multiplies f(y_j) with j = current index - k.
    """
    k = np.arange(n + 1, dtype=float)
    powers = k**m
    return step**m / gamma(m + 1.0) * (powers[1:] - powers[:-1])


def corrector_weights(m: float, n: int) -> np.ndarray:
    """Trapezoid-rule weights a_{j,n+1} for j = 0..n (unscaled).

    Multiply by h^m / Gamma(m + 2) to obtain the quadrature weights.
    """
    w = np.empty(n + 1)
    w[0] = n ** (m + 1) - (n - m) * (n + 1) ** m
    lag = np.arange(n - 1, -1, -1, dtype=float)
    w[1:] = (lag + 2) ** (m + 1) + lag ** (m + 1) - 2 * (lag + 1) ** (m + 1)
    return w


def _initial_array(initial) -> tuple[np.ndarray, Frame | None]:
    if isinstance(initial, StateVector):
        return initial.as_array(), initial.frame
    y0 = np.array(initial, dtype=float).reshape(-1)
    return y0, None


def _check_state(y: np.ndarray, t: float) -> np.ndarray:
    if not np.all(np.isfinite(y)):
        raise SolverError("non-finite state", t)
    if np.any(y < 0.0):
        if np.any(y < -NEGATIVE_TOLERANCE):
            raise SolverError(f"negative state {y.tolist()}", t)
        y = np.maximum(y, 0.0)
    return y


def solve_caputo_pece(
    rhs: VectorField,
    m: float,
    initial: StateVector | Sequence[float],
    opts: SolverOptions = SolverOptions(),
) -> Trajectory:
    """Integrate ``D^m y = rhs(y)`` with the fractional Adams PECE scheme.

    The history sums are accumulated directly, O(N^2) in the number of steps.
    With ``opts.memory_truncation = L`` only the L most recent history terms
    enter each sum (plus the initial value); L >= N reproduces full memory.

    Raises SolverError on overflow/NaN or when a component drops below
    ``-NEGATIVE_TOLERANCE``. Smaller undershoots are clamped to zero.
    """
    m = check_order(m)
    y0, frame = _initial_array(initial)
    if np.any(y0 < 0) or not np.all(np.isfinite(y0)):
        raise ValueError(f"initial state must be finite and nonnegative, got {y0.tolist()}")

    h = opts.step
    n_steps = opts.n_steps
    window = opts.memory_truncation
    iterations = opts.corrector_iterations

    times = h * np.arange(n_steps + 1)
    ys = np.empty((n_steps + 1, y0.size))
    fs = np.empty_like(ys)
    ys[0] = y0
    fs[0] = rhs(y0)
    if not np.all(np.isfinite(fs[0])):
        raise SolverError("non-finite rate", 0.0)

    # reversed so that the weights for j = j0..n are a contiguous slice
    b_rev = predictor_weights(m, h, n_steps)[::-1].copy()
    lag = np.arange(n_steps, dtype=float)
    a_lag = (lag + 2) ** (m + 1) + lag ** (m + 1) - 2 * (lag + 1) ** (m + 1)
    a_rev = a_lag[::-1].copy()
    corr_scale = h**m / gamma(m + 2.0)

    for n in range(n_steps):
        j0 = 0 if window is None else max(0, n + 1 - window)
        lo = n_steps - 1 - n
        predicted = y0 + b_rev[lo + j0 :] @ fs[j0 : n + 1]

        # corrector history: j = 0 carries its own end-point weight
        if j0 == 0:
            start_w = n ** (m + 1) - (n - m) * (n + 1) ** m
            history = start_w * fs[0]
            if n > 0:
                history = history + a_rev[lo + 1 :] @ fs[1 : n + 1]
        else:
            history = a_rev[lo + j0 :] @ fs[j0 : n + 1]

        t_next = times[n + 1]
        y = predicted
        for _ in range(iterations):
            rate = rhs(y)
            y = y0 + corr_scale * (rate + history)
        y = _check_state(y, t_next)
        ys[n + 1] = y
        rate = rhs(y)
        if not np.all(np.isfinite(rate)):
            raise SolverError("non-finite rate", t_next)
        fs[n + 1] = rate

    return Trajectory(times, ys, m, frame)


def reference_rk4(
    rhs: VectorField,
    initial: StateVector | Sequence[float],
    opts: SolverOptions = SolverOptions(),
) -> Trajectory:
    """Classical RK4 on the same uniform grid (integer order only)."""
    y0, frame = _initial_array(initial)
    h = opts.step
    n_steps = opts.n_steps
    times = h * np.arange(n_steps + 1)
    ys = np.empty((n_steps + 1, y0.size))
    ys[0] = y0
    y = y0
    for n in range(n_steps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise SolverError("non-finite state", times[n + 1])
        ys[n + 1] = y
    return Trajectory(times, ys, 1.0, frame)
