"""Command-line experiment runner.

Subcommands
-----------
``simulate``
    Run one configured experiment; emits ``diagnostics.csv`` (columns
    ``t, I_1..I_M, E, err``), optional per-component snapshot ``.npy``
    files, and ``manifest.json``.
``converge-time``
    Re-run one experiment over a ladder of time steps; emits
    ``convergence_time.csv`` (columns ``k, linf_error, order,
    cpu_seconds``).  With ``exact_error = true`` in the config the error
    is measured against the analytic solution; otherwise each rung is
    compared with the previous (finer-vs-coarser successive differences),
    so the first rung acts as the baseline and carries no error.
``converge-space``
    Re-run one experiment over a ladder of grid sizes at fixed small
    ``k``; emits ``convergence_space.csv`` (columns ``n, linf_error,
    cpu_seconds``).  Requires ``exact_error = true``.
``stability-map``
    Sample the amplification modulus ``|r(x, y)|`` of the
    integrating-factor scheme over a complex window for each requested
    dispersion parameter ``y``; emits one CSV per ``y`` (columns
    ``y_re, y_im, x_re, x_im, abs_r``) plus ``manifest.json``.

Outputs land under ``--output-root`` (default: the ``CNLS_OUTPUT_ROOT``
environment variable, else ``./runs``), in the subdirectory named by the
config's ``output_dir``.  ``manifest.json`` is written atomically at the
end of every command and lists each emitted file with its SHA-256 hash,
the resolved configuration, and per-phase wall-clock times.

Exit codes: 0 success, 2 invalid configuration or arguments,
3 solution divergence (manifest records the failing step), 4 I/O failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from time import perf_counter

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig, build_problem, load_config, load_preset, preset_names
from .diagnostics import energy, linf_error, masses
from .stability import stability_region
from .steppers import DESIGN_ORDER, DivergenceError, integrate

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4

_FLOAT = "{:.12e}".format
_TIME = "{:.9f}".format


def _output_root(args: argparse.Namespace) -> Path:
    if args.output_root is not None:
        return Path(args.output_root)
    return Path(os.environ.get("CNLS_OUTPUT_ROOT", "runs"))


def _load_experiment(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        return load_config(args.config)
    return load_preset(args.preset)


def _config_echo(cfg: ExperimentConfig) -> dict:
    echo = dataclasses.asdict(cfg)
    echo["bc"] = cfg.bc.value
    return echo


def _write_manifest(out_dir: Path, payload: dict) -> None:
    """Write ``manifest.json`` atomically, hashing every emitted file."""
    files = []
    for path in sorted(out_dir.rglob("*")):
        if path.is_file() and path.name not in ("manifest.json", "manifest.json.tmp"):
            files.append(
                {
                    "path": path.relative_to(out_dir).as_posix(),
                    "bytes": path.stat().st_size,
                    "sha256": hashlib.sha256(path.read_bytes()).hexdigest(),
                }
            )
    payload = dict(payload, version=__version__, files=files)
    tmp = out_dir / "manifest.json.tmp"
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    os.replace(tmp, out_dir / "manifest.json")


def _parse_step(text: str) -> float:
    """Parse a time step given as a decimal ('0.025') or fraction ('1/40')."""
    try:
        value = float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number or fraction: {text!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"time steps must be positive, got {text!r}")
    return value


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _diagnostic_row(state, problem) -> list[str]:
    cells = [_TIME(state.time)]
    cells.extend(_FLOAT(v) for v in masses(state, problem.grid))
    if state.m % 2 == 0:
        cells.append(_FLOAT(energy(state, problem.grid, problem.system, problem.mu)))
    else:
        cells.append("")
    if problem.exact is not None:
        cells.append(_FLOAT(linf_error(state.fields, problem.exact(state.time))))
    else:
        cells.append("")
    return cells


def run_simulate(cfg: ExperimentConfig, out_dir: Path) -> int:
    phases: dict[str, float] = {}
    t0 = perf_counter()
    problem = build_problem(cfg)
    out_dir.mkdir(parents=True, exist_ok=True)
    snap_dir = out_dir / "snapshots"
    diag_stride = cfg.diagnostic_stride()
    snap_stride = cfg.snapshot_stride()
    total_steps = cfg.steps()
    cadence = diag_stride if snap_stride is None else math.gcd(diag_stride, snap_stride)
    phases["setup"] = perf_counter() - t0

    header = ["t"]
    header.extend(f"I_{j + 1}" for j in range(problem.system.m))
    header.extend(["E", "err"])

    divergence = None
    t0 = perf_counter()
    with open(out_dir / "diagnostics.csv", "w", newline="") as diag_file:
        diag_file.write(",".join(header) + "\n")

        def observer(step: int, state) -> None:
            if step % diag_stride == 0 or step == total_steps:
                diag_file.write(",".join(_diagnostic_row(state, problem)) + "\n")
            if snap_stride is not None and (step % snap_stride == 0 or step == total_steps):
                snap_dir.mkdir(exist_ok=True)
                for j, field in enumerate(state.fields):
                    data = field if cfg.snapshot_complex else np.abs(field)
                    kind = "psi" if cfg.snapshot_complex else "abs_psi"
                    np.save(snap_dir / f"{kind}{j + 1}_s{step:08d}.npy", data)

        try:
            integrate(
                problem.state,
                problem.grid,
                problem.system,
                cfg.scheme,
                cfg.k,
                cfg.t_final,
                observer=observer,
                observe_every=cadence,
            )
        except DivergenceError as exc:
            divergence = {"step": exc.step, "time": exc.time, "max_modulus": exc.max_modulus}
            print(f"error: {exc}", file=sys.stderr)
    phases["integrate"] = perf_counter() - t0

    _write_manifest(
        out_dir,
        {
            "command": "simulate",
            "config": _config_echo(cfg),
            "divergence": divergence,
            "phases": phases,
        },
    )
    return EXIT_OK if divergence is None else EXIT_DIVERGENCE


def _ladder_rows(cfg: ExperimentConfig, ks: list[float]):
    """Run the time-step ladder sequentially, yielding (k, error, cpu) rows.

    With an exact reference every rung carries an error.  Otherwise the
    first rung is the comparison baseline (empty error cell) and each
    later rung carries the standard step-refinement error estimate: the
    difference from the previous rung divided by (k_prev/k)^p - 1 with
    p the steppers' design order, which estimates the finer solution's
    true error rather than the raw (roughly 15x larger) difference.
    """
    rows = []
    previous = None
    previous_k = None
    for k in ks:
        ratio = cfg.t_final / k
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, abs(ratio)):
            raise ConfigError(f"t_final={cfg.t_final} is not an integer multiple of k={k}")
        problem = build_problem(dataclasses.replace(cfg, k=k))
        t0 = perf_counter()
        final = integrate(
            problem.state, problem.grid, problem.system, cfg.scheme, k, cfg.t_final
        )
        cpu = perf_counter() - t0
        if problem.exact is not None:
            error = linf_error(final.fields, problem.exact(final.time))
        elif previous is not None:
            refinement = (previous_k / k) ** DESIGN_ORDER - 1.0
            if refinement <= 0:
                raise ConfigError("successive-difference ladders need strictly decreasing k")
            error = linf_error(final.fields, previous) / refinement
        else:
            error = None
        previous = final.fields
        previous_k = k
        rows.append((k, error, cpu))
    return rows


def _order_column(rows) -> list[float | None]:
    """Convergence order between consecutive rungs that both carry errors."""
    orders: list[float | None] = []
    prev_k = prev_err = None
    for k, error, _ in rows:
        if error is None or prev_err is None or error <= 0 or prev_err <= 0:
            orders.append(None)
        else:
            orders.append(math.log(prev_err / error) / math.log(prev_k / k))
        if error is not None:
            prev_k, prev_err = k, error
    return orders


def run_converge_time(cfg: ExperimentConfig, ks: list[float], out_dir: Path) -> int:
    t0 = perf_counter()
    rows = _ladder_rows(cfg, ks)
    orders = _order_column(rows)
    elapsed = perf_counter() - t0

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "convergence_time.csv", "w", newline="") as f:
        f.write("k,linf_error,order,cpu_seconds\n")
        for (k, error, cpu), order in zip(rows, orders):
            f.write(
                ",".join(
                    [
                        _FLOAT(k),
                        "" if error is None else _FLOAT(error),
                        "" if order is None else f"{order:.4f}",
                        _FLOAT(cpu),
                    ]
                )
                + "\n"
            )
    _write_manifest(
        out_dir,
        {
            "command": "converge-time",
            "config": _config_echo(cfg),
            "ks": ks,
            "phases": {"ladder": elapsed, "per_rung": [cpu for _, _, cpu in rows]},
        },
    )
    return EXIT_OK


def run_converge_space(cfg: ExperimentConfig, ns: list[int], out_dir: Path) -> int:
    if not cfg.exact_error:
        raise ConfigError(
            "converge-space needs an exact reference; set exact_error = true "
            "(single-soliton preset)"
        )
    rows = []
    t0 = perf_counter()
    for n in ns:
        problem = build_problem(dataclasses.replace(cfg, n=(n,) * cfg.dimension))
        t_run = perf_counter()
        final = integrate(
            problem.state, problem.grid, problem.system, cfg.scheme, cfg.k, cfg.t_final
        )
        cpu = perf_counter() - t_run
        rows.append((n, linf_error(final.fields, problem.exact(final.time)), cpu))
    elapsed = perf_counter() - t0

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "convergence_space.csv", "w", newline="") as f:
        f.write("n,linf_error,cpu_seconds\n")
        for n, error, cpu in rows:
            f.write(f"{n},{_FLOAT(error)},{_FLOAT(cpu)}\n")
    _write_manifest(
        out_dir,
        {
            "command": "converge-space",
            "config": _config_echo(cfg),
            "ns": ns,
            "phases": {"ladder": elapsed, "per_rung": [cpu for _, _, cpu in rows]},
        },
    )
    return EXIT_OK


def run_stability_map(
    ys: list[complex],
    window: tuple[float, float, float, float],
    resolution: tuple[int, int],
    out_dir: Path,
) -> int:
    if not ys:
        print("warning: no y values given; nothing to do", file=sys.stderr)
        return EXIT_OK
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = perf_counter()
    areas = {}
    for index, y in enumerate(ys):
        region = stability_region(y, window=window, resolution=resolution)
        areas[str(y)] = region.stable_area
        with open(out_dir / f"stability_y{index}.csv", "w", newline="") as f:
            f.write("y_re,y_im,x_re,x_im,abs_r\n")
            y_re, y_im = _FLOAT(region.y.real), _FLOAT(region.y.imag)
            for i, x_im in enumerate(region.x_im):
                for j, x_re in enumerate(region.x_re):
                    f.write(
                        f"{y_re},{y_im},{_FLOAT(x_re)},{_FLOAT(x_im)},"
                        f"{_FLOAT(region.abs_r[i, j])}\n"
                    )
    _write_manifest(
        out_dir,
        {
            "command": "stability-map",
            "ys": [str(y) for y in ys],
            "window": list(window),
            "resolution": list(resolution),
            "stable_areas": areas,
            "phases": {"map": perf_counter() - t0},
        },
    )
    return EXIT_OK


def _add_experiment_args(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", metavar="FILE", help="path to a TOML experiment config")
    source.add_argument(
        "--preset",
        metavar="NAME",
        help=f"name of a committed experiment config ({', '.join(preset_names() or ['none installed'])})",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnls",
        description="Simulate coupled nonlinear Schrodinger systems with "
        "fourth-order exponential integrators on spectral grids.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--output-root",
        metavar="DIR",
        default=None,
        help="directory receiving run outputs (default: $CNLS_OUTPUT_ROOT or ./runs)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one experiment, writing diagnostics and snapshots")
    _add_experiment_args(p)

    p = sub.add_parser("converge-time", help="time-step refinement ladder at fixed grid")
    _add_experiment_args(p)
    p.add_argument(
        "--ks",
        metavar="K",
        nargs="+",
        required=True,
        type=_parse_step,
        help="time steps, decimals or fractions, e.g. --ks 1/40 1/80 1/160",
    )

    p = sub.add_parser("converge-space", help="grid refinement ladder at fixed small k")
    _add_experiment_args(p)
    p.add_argument(
        "--ns",
        metavar="N",
        nargs="+",
        required=True,
        type=int,
        help="grid sizes per axis, e.g. --ns 64 128 256 512",
    )

    p = sub.add_parser(
        "stability-map", help="sample |r(x, y)| of the integrating-factor scheme"
    )
    p.add_argument(
        "--ys",
        metavar="Y",
        nargs="*",
        default=[],
        type=_parse_complex,
        help="dispersion parameters y, e.g. --ys 0 -1 -2 -3 -4 -5",
    )
    p.add_argument(
        "--window",
        metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"),
        nargs=4,
        type=float,
        default=(-6.0, 1.0, -5.0, 5.0),
        help="complex window sampled for x (default: -6 1 -5 5)",
    )
    p.add_argument(
        "--res",
        metavar=("N_RE", "N_IM"),
        nargs=2,
        type=int,
        default=(141, 201),
        help="samples along the real and imaginary axes (default: 141 201)",
    )
    p.add_argument(
        "--output-dir",
        metavar="NAME",
        default="stability",
        help="subdirectory under the output root (default: stability)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    root = _output_root(args)
    try:
        if args.command == "stability-map":
            return run_stability_map(
                args.ys, tuple(args.window), tuple(args.res), root / args.output_dir
            )
        cfg = _load_experiment(args)
        out_dir = root / cfg.output_dir
        if args.command == "simulate":
            return run_simulate(cfg, out_dir)
        if args.command == "converge-time":
            return run_converge_time(cfg, args.ks, out_dir)
        return run_converge_space(cfg, args.ns, out_dir)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
