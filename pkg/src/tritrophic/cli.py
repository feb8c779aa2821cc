"""Command-line front end.

    tritrophic simulate  --params ex1.txt --m 0.9 --h 0.05 --t-end 500 -o traj.csv
    tritrophic equilibria --preset stable-node
    tritrophic stability --params ex1.txt --m 0.9
    tritrophic global --preset globally-stable
    tritrophic sweep --preset stable-focus --param a0 --lo 1.6 --hi 2.1 --count 101 --m 0.97 -o bif.csv
    tritrophic check-invariance --params rescaled.txt

Exit status: 0 on success, 1 on numerical failure, 2 on usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from dataclasses import dataclass
from pathlib import Path

from . import io
from .equilibria import equilibria, interior_existence_thresholds, residual
from .fode import SolverError, SolverOptions, check_order, solve_caputo_pece
from .model import (
    ORIGINAL_KEYS,
    Frame,
    OriginalParams,
    RescaledParams,
    StateVector,
    invariance_check,
    original_field,
    rescale_params,
    rescaled_field,
    unscale_state,
)
from .presets import DEFAULT_INITIAL, PRESETS
from .stability import eigen_arg_check, global_stability_check, jacobian_at
from .sweep import SweepSpec, detect_first_doubling, run_sweep

COMMANDS = ("simulate", "equilibria", "stability", "global", "sweep", "check-invariance")

# option name -> (type, default); shared by flags and config files
OPTIONS = {
    "params": (str, None),
    "preset": (str, None),
    "frame": (str, "original"),
    "m": (float, 1.0),
    "h": (float, 0.05),
    "t_end": (float, 500.0),
    "x0": (float, DEFAULT_INITIAL[0]),
    "y0": (float, DEFAULT_INITIAL[1]),
    "z0": (float, DEFAULT_INITIAL[2]),
    "memory": (int, None),
    "corrector_iterations": (int, 1),
    "output": (str, None),
    "param": (str, "a0"),
    "lo": (float, 1.6),
    "hi": (float, 2.1),
    "count": (int, 101),
    "transient": (float, 300.0),
    "rel_tol": (float, 1e-2),
    "workers": (int, 1),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    params: OriginalParams | RescaledParams
    params_path: str | None
    frame: Frame
    m: float
    solver: SolverOptions
    initial: StateVector
    sweep: SweepSpec | None
    output_path: str | None
    workers: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tritrophic", description="Fractional-order tritrophic food chain toolkit")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key=value file with defaults for any option below")
    parser.add_argument("--params", help="parameter file (original or rescaled keys)")
    parser.add_argument("--preset", help=f"built-in parameter set: {', '.join(PRESETS)}")
    parser.add_argument("--frame", choices=[f.value for f in Frame])
    parser.add_argument("--m", type=str, help="fractional order, 0 < m <= 1")
    parser.add_argument("--h", type=str, help="step size")
    parser.add_argument("--t-end", dest="t_end", type=str)
    parser.add_argument("--x0", type=str)
    parser.add_argument("--y0", type=str)
    parser.add_argument("--z0", type=str)
    parser.add_argument("--memory", type=str, help="history terms kept (default: full memory)")
    parser.add_argument("--corrector-iterations", dest="corrector_iterations", type=str)
    parser.add_argument("-o", "--output", help="output file (default: stdout)")
    sweep = parser.add_argument_group("sweep")
    sweep.add_argument("--param", help="swept original parameter")
    sweep.add_argument("--lo", type=str)
    sweep.add_argument("--hi", type=str)
    sweep.add_argument("--count", type=str)
    sweep.add_argument("--transient", type=str)
    sweep.add_argument("--rel-tol", dest="rel_tol", type=str)
    sweep.add_argument("--workers", type=str)
    return parser


def _read_config(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    values = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        key = key.replace("-", "_")
        if not sep:
            raise UsageError(f"config {path}: expected key=value, got {line!r}")
        if key not in OPTIONS:
            raise UsageError(f"config {path}: unknown key {key!r}")
        values[key] = value
    return values


def _convert(key: str, raw):
    kind, default = OPTIONS[key]
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise UsageError(f"malformed value for {key}: {raw!r}") from None


def _load_params(opts: dict) -> tuple[OriginalParams | RescaledParams, str | None]:
    if opts["params"] and opts["preset"]:
        raise UsageError("give either params or preset, not both")
    if opts["preset"]:
        try:
            return PRESETS[opts["preset"]], None
        except KeyError:
            raise UsageError(f"unknown preset {opts['preset']!r}") from None
    if not opts["params"]:
        raise UsageError("missing required field: params (or preset)")
    try:
        return io.read_params(opts["params"]), opts["params"]
    except OSError as exc:
        raise UsageError(f"cannot read params {opts['params']}: {exc}") from None
    except io.ParamFileError as exc:
        raise UsageError(str(exc)) from None


def parse_config(argv: list[str]) -> RunConfig:
    """Parse command-line tokens (flags override values from ``--config``)."""
    ns = build_parser().parse_args(argv)
    from_file = _read_config(ns.config) if ns.config else {}
    opts = {}
    for key in OPTIONS:
        flag = getattr(ns, key, None)
        opts[key] = _convert(key, flag if flag is not None else from_file.get(key))

    try:
        m = check_order(opts["m"])
    except ValueError as exc:
        raise UsageError(f"m: {exc}") from None
    try:
        solver = SolverOptions(
            step=opts["h"],
            t_end=opts["t_end"],
            memory_truncation=opts["memory"],
            corrector_iterations=opts["corrector_iterations"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        frame = Frame(opts["frame"])
    except ValueError:
        raise UsageError(f"frame must be original or rescaled, got {opts['frame']!r}") from None
    try:
        initial = StateVector(opts["x0"], opts["y0"], opts["z0"], frame)
    except ValueError as exc:
        raise UsageError(f"initial state: {exc}") from None

    params, path = _load_params(opts)
    if isinstance(params, RescaledParams) and ns.command == "simulate":
        if ns.frame == "original" or from_file.get("frame") == "original":
            raise UsageError("simulate in the original frame needs original parameters")
        frame = Frame.RESCALED
        initial = StateVector(initial.x, initial.y, initial.z, frame)

    sweep = None
    if ns.command == "sweep":
        if not isinstance(params, OriginalParams):
            raise UsageError("sweep needs original parameters")
        if opts["param"] not in ORIGINAL_KEYS:
            raise UsageError(f"param: unknown parameter {opts['param']!r}")
        if frame is not Frame.ORIGINAL:
            raise UsageError("sweep runs in the original frame")
        try:
            sweep = SweepSpec(
                parameter_name=opts["param"],
                lo=opts["lo"],
                hi=opts["hi"],
                count=opts["count"],
                m=m,
                sim=solver,
                transient=opts["transient"],
                initial=initial,
                rel_tol=opts["rel_tol"],
            )
        except ValueError as exc:
            raise UsageError(f"sweep: {exc}") from None
    if opts["workers"] < 1:
        raise UsageError("workers must be >= 1")

    return RunConfig(ns.command, params, path, frame, m, solver, initial, sweep, opts["output"], opts["workers"])


@contextlib.contextmanager
def _open_output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _rescaled(params) -> RescaledParams:
    return rescale_params(params) if isinstance(params, OriginalParams) else params


def _simulate(cfg: RunConfig) -> None:
    if cfg.frame is Frame.ORIGINAL:
        rhs = original_field(cfg.params)
    else:
        rhs = rescaled_field(_rescaled(cfg.params))
    traj = solve_caputo_pece(rhs, cfg.m, cfg.initial, cfg.solver)
    with _open_output(cfg.output_path) as fh:
        io.write_trajectory_csv(traj.times, traj.states, fh)


def _equilibria(cfg: RunConfig) -> None:
    rp = _rescaled(cfg.params)
    eqs = equilibria(rp)
    residuals = {name: residual(rp, s) for name, s in eqs.present().items()}
    original = thresholds = None
    if isinstance(cfg.params, OriginalParams):
        original = {name: unscale_state(cfg.params, s) for name, s in eqs.present().items()}
        thresholds = interior_existence_thresholds(cfg.params)
    with _open_output(cfg.output_path) as fh:
        io.write_report(io.equilibria_items(eqs, residuals, original, thresholds), fh)


def _stability(cfg: RunConfig) -> None:
    rp = _rescaled(cfg.params)
    e = equilibria(rp).E_star
    with _open_output(cfg.output_path) as fh:
        if e is None:
            io.write_report({"E_star": None}, fh)
            return
        report = eigen_arg_check(jacobian_at(rp, e), cfg.m)
        io.write_report({"E_star": e, **io.stability_items(report)}, fh)


def _global(cfg: RunConfig) -> None:
    rp = _rescaled(cfg.params)
    e = equilibria(rp).E_star
    with _open_output(cfg.output_path) as fh:
        if e is None:
            io.write_report({"E_star": None}, fh)
            return
        io.write_report({"E_star": e, **io.global_items(global_stability_check(rp, e))}, fh)


def _check_invariance(cfg: RunConfig) -> None:
    with _open_output(cfg.output_path) as fh:
        io.write_report(io.invariance_items(invariance_check(_rescaled(cfg.params))), fh)


def _sweep(cfg: RunConfig) -> None:
    result = run_sweep(cfg.sweep, cfg.params, workers=cfg.workers)
    onset = detect_first_doubling(result)
    with _open_output(cfg.output_path) as fh:
        io.write_sweep_csv(result, fh)
    report_stream = sys.stdout if cfg.output_path else sys.stderr
    report_stream.write(io.doubling_line(result.parameter_name, onset))


HANDLERS = {
    "simulate": _simulate,
    "equilibria": _equilibria,
    "stability": _stability,
    "global": _global,
    "sweep": _sweep,
    "check-invariance": _check_invariance,
}


def run(cfg: RunConfig) -> int:
    try:
        HANDLERS[cfg.command](cfg)
    except SolverError as exc:
        print(f"tritrophic: numerical failure: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"tritrophic: usage error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)
