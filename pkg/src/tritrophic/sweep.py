"""One-parameter sweeps of the original model and period-doubling detection.

For each parameter value the model is integrated, the transient discarded,
and the strict local maxima of the prey density X are collected. Maxima
closer than a tolerance are merged; the number of resulting clusters is 1
on a period-1 cycle, 2 after the first doubling, and large in chaos.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .fode import SolverError, SolverOptions, check_order, solve_caputo_pece
from .model import ORIGINAL_KEYS, Frame, OriginalParams, StateVector, original_field
from .presets import DEFAULT_INITIAL

#: oscillations smaller than this fraction of the mean level are clustered
#: against the level instead of their own amplitude
LEVEL_FLOOR = 1e-2


@dataclass(frozen=True)
class SweepSpec:
    parameter_name: str = "a0"
    lo: float = 1.6
    hi: float = 2.1
    count: int = 101
    m: float = 1.0
    sim: SolverOptions = field(default_factory=lambda: SolverOptions(step=0.05, t_end=500.0))
    transient: float = 300.0
    initial: StateVector = StateVector(*DEFAULT_INITIAL, Frame.ORIGINAL)
    rel_tol: float = 1e-2

    def __post_init__(self):
        if self.parameter_name not in ORIGINAL_KEYS:
            raise ValueError(f"unknown sweep parameter {self.parameter_name!r}")
        if not self.lo < self.hi:
            raise ValueError("sweep range needs lo < hi")
        if self.count < 2:
            raise ValueError("sweep count must be >= 2")
        if not 0 <= self.transient < self.sim.t_end:
            raise ValueError("transient must lie in [0, t_end)")
        if self.rel_tol <= 0:
            raise ValueError("rel_tol must be positive")
        check_order(self.m)
        self.initial.expect(Frame.ORIGINAL)

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


@dataclass
class SweepPoint:
    value: float
    maxima: np.ndarray
    cluster_count: int
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass
class SweepResult:
    parameter_name: str
    points: list[SweepPoint]

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self.points])

    @property
    def cluster_counts(self) -> list[int]:
        return [p.cluster_count for p in self.points]

    @property
    def failed(self) -> list[SweepPoint]:
        return [p for p in self.points if p.failed]


def local_maxima(series: np.ndarray) -> np.ndarray:
    """Values at strict interior maxima x[i-1] < x[i] > x[i+1]."""
    series = np.asarray(series)
    mid = series[1:-1]
    mask = (series[:-2] < mid) & (mid > series[2:])
    return mid[mask]


def count_clusters(maxima: np.ndarray, tol: float) -> int:
    if len(maxima) == 0:
        return 0
    gaps = np.diff(np.sort(maxima))
    return 1 + int(np.count_nonzero(gaps > tol))


def cluster_tolerance(series: np.ndarray, rel_tol: float) -> float:
    amplitude = float(np.max(series) - np.min(series))
    level = float(np.mean(np.abs(series)))
    return rel_tol * max(amplitude, LEVEL_FLOOR * level)


def analyse_window(series: np.ndarray, rel_tol: float) -> tuple[np.ndarray, int]:
    """Sorted maxima of a post-transient series and their cluster count."""
    maxima = np.sort(local_maxima(series))
    return maxima, count_clusters(maxima, cluster_tolerance(series, rel_tol))


def run_point(spec: SweepSpec, base: OriginalParams, value: float) -> SweepPoint:
    params = base.replace(**{spec.parameter_name: float(value)})
    try:
        traj = solve_caputo_pece(original_field(params), spec.m, spec.initial, spec.sim)
    except SolverError as exc:
        return SweepPoint(float(value), np.empty(0), 0, error=str(exc))
    start = int(round(spec.transient / spec.sim.step))
    maxima, clusters = analyse_window(traj.states[start:, 0], spec.rel_tol)
    return SweepPoint(float(value), maxima, clusters)


def run_sweep(spec: SweepSpec, base: OriginalParams, workers: int | None = 1) -> SweepResult:
    """Integrate at every grid value; ``workers > 1`` uses a process pool.

    Results come back in grid order whatever the execution order.
    """
    values = spec.values()
    job = partial(run_point, spec, base)
    if workers is not None and workers <= 1:
        points = [job(v) for v in values]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(job, values))
    failed = [p for p in points if p.failed]
    if failed:
        warnings.warn(
            f"{len(failed)} of {len(points)} sweep points failed "
            f"(first at {spec.parameter_name}={failed[0].value:.6g}: {failed[0].error})",
            RuntimeWarning,
            stacklevel=2,
        )
    return SweepResult(spec.parameter_name, points)


def detect_first_doubling(result: SweepResult) -> float | None:
    """First parameter where the cluster count goes from <= 1 to >= 2.

    The location is where the cluster count, interpolated linearly between
    the two neighbouring successful grid points, crosses 1.5. Failed points
    are skipped.
    """
    good = [p for p in result.points if not p.failed]
    for prev, cur in zip(good, good[1:]):
        if prev.cluster_count <= 1 and cur.cluster_count >= 2:
            frac = (1.5 - prev.cluster_count) / (cur.cluster_count - prev.cluster_count)
            return prev.value + frac * (cur.value - prev.value)
    return None
