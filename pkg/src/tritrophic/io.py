"""File formats: key=value parameter files, trajectory/sweep CSV, key=value reports."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import IO

import numpy as np

from .equilibria import ExistenceThresholds, EquilibriumSet
from .model import ORIGINAL_KEYS, RESCALED_KEYS, InvarianceReport, OriginalParams, RescaledParams, StateVector
from .stability import GlobalReport, StabilityReport
from .sweep import SweepResult


class ParamFileError(ValueError):
    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


def fmt(value: float) -> str:
    """Nine significant digits."""
    return f"{float(value):.9g}"


def parse_params(text: str, source: str = "<params>") -> OriginalParams | RescaledParams:
    """Parse ``key=value`` lines; '#' starts a comment. The key set selects the frame."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamFileError(f"{source}:{lineno}: expected key=value, got {line!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in ORIGINAL_KEYS and key not in RESCALED_KEYS:
            raise ParamFileError(f"{source}:{lineno}: unknown key {key!r}", key)
        if key in values:
            raise ParamFileError(f"{source}:{lineno}: duplicate key {key!r}", key)
        try:
            number = float(value)
        except ValueError:
            raise ParamFileError(f"{source}:{lineno}: malformed number for {key!r}: {value!r}", key) from None
        if not math.isfinite(number):
            raise ParamFileError(f"{source}:{lineno}: non-finite value for {key!r}", key)
        values[key] = number

    if set(values) <= set(RESCALED_KEYS) and values:
        keys, cls = RESCALED_KEYS, RescaledParams
    else:
        keys, cls = ORIGINAL_KEYS, OriginalParams
    stray = [k for k in values if k not in keys]
    if stray:
        raise ParamFileError(f"{source}: key {stray[0]!r} mixes original and rescaled parameters", stray[0])
    missing = [k for k in keys if k not in values]
    if missing:
        raise ParamFileError(f"{source}: missing key {missing[0]!r}", missing[0])
    try:
        return cls(**values)
    except ValueError as exc:
        raise ParamFileError(f"{source}: {exc}") from None


def read_params(path: str | Path) -> OriginalParams | RescaledParams:
    path = Path(path)
    return parse_params(path.read_text(), str(path))


def format_params(params: OriginalParams | RescaledParams) -> str:
    keys = ORIGINAL_KEYS if isinstance(params, OriginalParams) else RESCALED_KEYS
    return "".join(f"{k}={fmt(getattr(params, k))}\n" for k in keys)


def write_trajectory_csv(times: np.ndarray, states: np.ndarray, fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t", "x", "y", "z"])
    for t, (x, y, z) in zip(times, states):
        writer.writerow([fmt(t), fmt(x), fmt(y), fmt(z)])


def read_trajectory_csv(fh: IO[str]) -> tuple[np.ndarray, np.ndarray]:
    reader = csv.reader(fh)
    header = next(reader)
    if header != ["t", "x", "y", "z"]:
        raise ValueError(f"unexpected trajectory header {header}")
    rows = np.array([[float(v) for v in row] for row in reader])
    return rows[:, 0], rows[:, 1:]


def write_sweep_csv(result: SweepResult, fh: IO[str]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["param", "value", "x_max"])
    for point in result.points:
        for x_max in point.maxima:
            writer.writerow([result.parameter_name, fmt(point.value), fmt(x_max)])


def write_report(items: dict[str, object], fh: IO[str]) -> None:
    for key, value in items.items():
        fh.write(f"{key}={_render(value)}\n")


def parse_report(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line.strip():
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _render(value) -> str:
    if value is None:
        return "absent"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, StateVector):
        return ",".join(fmt(v) for v in (value.x, value.y, value.z))
    if isinstance(value, (float, int, np.floating)):
        return fmt(value)
    return str(getattr(value, "value", value))


def equilibria_items(
    eqs: EquilibriumSet,
    residuals: dict[str, float],
    original: dict[str, StateVector] | None = None,
    thresholds: ExistenceThresholds | None = None,
) -> dict[str, object]:
    items: dict[str, object] = {"frame": "rescaled"}
    for name in ("E0", "E1", "E2", "E_star"):
        state = getattr(eqs, name)
        items[name] = state
        if state is not None:
            items[f"residual_{name}"] = residuals[name]
        if original is not None:
            items[f"{name}_original"] = original.get(name)
    items["theta"] = eqs.theta
    items["nonunique"] = eqs.nonunique
    if eqs.alternate is not None:
        items["E_star_alternate"] = eqs.alternate
    if thresholds is not None:
        items.update(
            threshold_t1=thresholds.t1,
            threshold_t2=thresholds.t2,
            threshold_t3=thresholds.t3,
            premise_v1_gt_a1=thresholds.prey_premise,
            premise_v3_gt_d3c3=thresholds.top_premise,
            threshold_verdict=thresholds.verdict,
        )
    return items


def stability_items(report: StabilityReport) -> dict[str, object]:
    cp = report.charpoly
    items: dict[str, object] = {"A1": cp.A1, "A2": cp.A2, "A3": cp.A3, "D": cp.discriminant}
    for i, eig in enumerate(report.eigenvalues, 1):
        items[f"eig{i}_re"] = eig.real
        items[f"eig{i}_im"] = eig.imag
    items.update(
        clause=report.clause,
        m=report.m,
        m_star=report.critical_order,
        verdict=report.verdict,
    )
    return items


def global_items(report: GlobalReport) -> dict[str, object]:
    items: dict[str, object] = {"c1": report.c1}
    for name, cond in report.variants.items():
        items[f"alpha_{name}"] = cond.alpha
        items[f"bracket_{name}"] = cond.bracket
        items[f"c2_{name}"] = cond.c2
        items[f"c3_{name}"] = cond.c3
        items[f"verdict_{name}"] = cond.verdict
    return items


def invariance_items(report: InvarianceReport) -> dict[str, object]:
    return {
        "condition_holds": report.condition_holds,
        "lhs": report.lhs,
        "q_over_p": report.q_over_p,
        "alpha": report.alpha,
        "alpha_with_d": report.alpha_with_d,
        "M": report.M,
        "x_bound": report.x_bound,
        "xy_bound": report.xy_bound,
        "xyz_bound": report.xyz_bound,
    }


def doubling_line(parameter: str, value: float | None) -> str:
    return f"first_doubling_{parameter}={_render(value)}\n"

