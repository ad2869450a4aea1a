"""Experiment configuration: TOML parsing, validation and problem assembly.

A config file has four tables::

    [grid]
    dimension = 1
    bounds = [-20.0, 80.0]        # or one [a, b] pair per axis
    n = 1024                      # or one value per axis
    bc = "periodic"               # periodic | dirichlet | neumann

    [initial]
    preset = "single-soliton"     # see PRESETS; "custom" takes `path = ...`
    mu = 2.0                      # preset-specific parameters, all optional
    ...

    [system]                      # optional overrides of the preset's coefficients
    alpha = [0.5, 0.5]
    sigma = [[1.0, 0.6], [0.6, 1.0]]
    mu = 2.0                      # energy normalization 1/(2 mu)

    [run]
    scheme = "krogstad-p22"       # or "ifrk4-p13"
    k = 0.0125
    t_final = 5.0
    diagnostic_every = 1.0        # time between diagnostics rows (default: k)
    snapshot_every = 0.0          # time between snapshots (0 or absent: none)
    snapshot_complex = false      # true: dump complex fields, not moduli
    exact_error = false           # single-soliton only: track error vs exact
    output_dir = "example1"       # relative paths land under the output root

Everything is validated before any grid-sized array is allocated;
violations raise :class:`ConfigError` (the CLI maps this to exit code 2).
:func:`build_problem` then materializes the grid, coefficients, initial
state and (optionally) the exact-solution callback.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import model
from .grids import BoundaryCondition, Grid
from .model import SystemCoefficients, SystemState
from .steppers import SCHEMES

#: Directory of committed experiment presets (example1..example5, blowup).
PRESET_DIR = Path(__file__).parent / "presets"


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


@dataclass(frozen=True)
class _PresetSpec:
    builder: Callable | None
    m: int | None  # None: determined by the field file (custom)
    dimension: int | None  # None: any
    params: tuple[str, ...]


#: Initial-condition presets: component count, dimensionality, parameters.
PRESETS = {
    "single-soliton": _PresetSpec(model.single_soliton, 2, 1, ("mu", "alpha", "e", "v")),
    "two-soliton": _PresetSpec(
        model.two_soliton, 2, 1, ("r1", "r2", "v1", "v2", "x10", "x20", "e", "mu")
    ),
    "four-soliton": _PresetSpec(model.four_soliton, 4, 1, ("r", "v", "x10", "x30", "b", "e")),
    "four-wave-2d": _PresetSpec(
        model.four_wave_2d, 4, 2, ("offset", "self_coupling", "cross_coupling")
    ),
    "four-wave-3d": _PresetSpec(
        model.four_wave_3d, 4, 3, ("offset", "self_coupling", "cross_coupling")
    ),
    "blow-up-pair": _PresetSpec(model.blow_up_pair, 1, 1, ("strength",)),
    "custom": _PresetSpec(None, None, None, ("path",)),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment description (no arrays allocated yet)."""

    dimension: int
    bounds: tuple[tuple[float, float], ...]
    n: tuple[int, ...]
    bc: BoundaryCondition
    preset: str
    preset_params: dict[str, Any] = field(default_factory=dict)
    alpha: tuple[float, ...] | None = None
    sigma: tuple[tuple[float, ...], ...] | None = None
    mu: float = 1.0
    scheme: str = "krogstad-p22"
    k: float = 0.01
    t_final: float = 1.0
    diagnostic_every: float | None = None
    snapshot_every: float | None = None
    snapshot_complex: bool = False
    exact_error: bool = False
    output_dir: str = "run"

    @property
    def m(self) -> int:
        """Component count implied by the preset (or its field file)."""
        spec = PRESETS[self.preset]
        if spec.m is not None:
            return spec.m
        m, _, _, _ = model.read_fields_header(self.preset_params["path"])
        return m

    def steps(self) -> int:
        return round(self.t_final / self.k)

    def diagnostic_stride(self) -> int:
        """Observation cadence in steps (1 row per step when unset)."""
        if self.diagnostic_every is None:
            return 1
        return round(self.diagnostic_every / self.k)

    def snapshot_stride(self) -> int | None:
        if self.snapshot_every is None:
            return None
        return round(self.snapshot_every / self.k)


def _require(table: dict, key: str, kind, where: str):
    if key not in table:
        raise ConfigError(f"missing required key '{key}' in [{where}]")
    value = table[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(
            f"[{where}] {key} must be {getattr(kind, '__name__', kind)}, "
            f"got {type(value).__name__}"
        )
    return value


def _as_pairs(bounds, dimension: int) -> tuple[tuple[float, float], ...]:
    def pair(item) -> tuple[float, float]:
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise ConfigError(f"[grid] bounds entries must be [a, b] pairs, got {item!r}")
        a, b = float(item[0]), float(item[1])
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise ConfigError(f"[grid] bounds must be finite with a < b, got [{a}, {b}]")
        return a, b

    if (
        isinstance(bounds, (list, tuple))
        and len(bounds) == 2
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in bounds)
    ):
        return (pair(bounds),) * dimension
    if not isinstance(bounds, (list, tuple)) or len(bounds) != dimension:
        raise ConfigError(
            f"[grid] bounds must be one [a, b] pair or {dimension} of them, got {bounds!r}"
        )
    return tuple(pair(item) for item in bounds)


def _as_sizes(n, dimension: int, bc: BoundaryCondition) -> tuple[int, ...]:
    if isinstance(n, int) and not isinstance(n, bool):
        sizes = (n,) * dimension
    elif isinstance(n, (list, tuple)) and len(n) == dimension and all(
        isinstance(v, int) and not isinstance(v, bool) for v in n
    ):
        sizes = tuple(int(v) for v in n)
    else:
        raise ConfigError(
            f"[grid] n must be one integer or {dimension} of them, got {n!r}"
        )
    for size in sizes:
        if size < 2:
            raise ConfigError(f"[grid] n must be >= 2 per axis, got {size}")
        if bc is BoundaryCondition.PERIODIC and size % 2 != 0:
            raise ConfigError(f"[grid] periodic axes require even n, got {size}")
    return sizes


def _positive(value: float, name: str) -> float:
    if not (isinstance(value, (int, float)) and not isinstance(value, bool)):
        raise ConfigError(f"[run] {name} must be a number, got {value!r}")
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(f"[run] {name} must be positive and finite, got {value}")
    return value


def _check_multiple(span: float, k: float, name: str) -> None:
    ratio = span / k
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, abs(ratio)) or round(ratio) < 1:
        raise ConfigError(
            f"[run] {name}={span} is not a positive integer multiple of k={k}"
        )


def load_config(source) -> ExperimentConfig:
    """Load and validate a config from a TOML path or an equivalent dict."""
    if isinstance(source, dict):
        raw = source
        base_dir = Path.cwd()
    else:
        path = Path(source)
        try:
            with open(path, "rb") as f:
                raw = tomllib.load(f)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid TOML: {exc}") from None
        base_dir = path.parent

    for table in ("grid", "initial", "run"):
        if table not in raw or not isinstance(raw[table], dict):
            raise ConfigError(f"config must contain a [{table}] table")
    grid_t, initial_t = raw["grid"], raw["initial"]
    system_t, run_t = raw.get("system", {}), raw["run"]
    if not isinstance(system_t, dict):
        raise ConfigError("[system] must be a table")

    dimension = _require(grid_t, "dimension", int, "grid")
    if dimension not in (1, 2, 3):
        raise ConfigError(f"[grid] dimension must be 1, 2 or 3, got {dimension}")
    try:
        bc = BoundaryCondition(_require(grid_t, "bc", str, "grid"))
    except ValueError:
        raise ConfigError(
            f"[grid] bc must be one of {[b.value for b in BoundaryCondition]}, "
            f"got {grid_t['bc']!r}"
        ) from None
    bounds = _as_pairs(_require(grid_t, "bounds", (list, tuple), "grid"), dimension)
    n = _as_sizes(grid_t["n"] if "n" in grid_t else None, dimension, bc)

    preset = _require(initial_t, "preset", str, "initial")
    if preset not in PRESETS:
        raise ConfigError(
            f"[initial] preset must be one of {sorted(PRESETS)}, got {preset!r}"
        )
    spec = PRESETS[preset]
    params = {key: value for key, value in initial_t.items() if key != "preset"}
    unknown = set(params) - set(spec.params)
    if unknown:
        raise ConfigError(
            f"[initial] unknown parameters {sorted(unknown)} for preset '{preset}' "
            f"(accepted: {list(spec.params)})"
        )
    if spec.dimension is not None and spec.dimension != dimension:
        raise ConfigError(
            f"preset '{preset}' is {spec.dimension}-D but [grid] dimension is {dimension}"
        )
    if preset == "custom":
        if "path" not in params:
            raise ConfigError("[initial] preset 'custom' requires a 'path'")
        params["path"] = str((base_dir / str(params["path"])).resolve())
        try:
            file_m, file_d, file_shape, file_bc = model.read_fields_header(params["path"])
        except FileNotFoundError:
            raise ConfigError(f"[initial] field file not found: {params['path']}") from None
        except ValueError as exc:
            raise ConfigError(f"[initial] bad field file: {exc}") from None
        if file_d != dimension or file_shape != n or file_bc != bc.value:
            raise ConfigError(
                f"[initial] field file is d={file_d}, N={file_shape}, bc={file_bc}; "
                f"config grid is d={dimension}, N={n}, bc={bc.value}"
            )
        if "alpha" not in system_t or "sigma" not in system_t:
            raise ConfigError(
                "[system] alpha and sigma are required with the 'custom' preset"
            )
        preset_m = file_m
    else:
        preset_m = spec.m

    alpha = system_t.get("alpha")
    if alpha is not None:
        if not (
            isinstance(alpha, (list, tuple))
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in alpha)
        ):
            raise ConfigError(f"[system] alpha must be a list of numbers, got {alpha!r}")
        if len(alpha) != preset_m:
            raise ConfigError(
                f"[system] alpha has {len(alpha)} entries but preset '{preset}' "
                f"has M={preset_m} components"
            )
        alpha = tuple(float(v) for v in alpha)
    sigma = system_t.get("sigma")
    if sigma is not None:
        ok = isinstance(sigma, (list, tuple)) and len(sigma) == preset_m and all(
            isinstance(row, (list, tuple))
            and len(row) == preset_m
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row)
            for row in sigma
        )
        if not ok:
            raise ConfigError(
                f"[system] sigma must be an {preset_m}x{preset_m} matrix to match "
                f"preset '{preset}'"
            )
        sigma = tuple(tuple(float(v) for v in row) for row in sigma)
    if "mu" in system_t:
        mu = _positive(system_t["mu"], "mu")
    elif "mu" in params:
        mu = _positive(params["mu"], "mu")
    else:
        mu = 1.0

    scheme = _require(run_t, "scheme", str, "run")
    if scheme not in SCHEMES:
        raise ConfigError(f"[run] scheme must be one of {SCHEMES}, got {scheme!r}")
    k = _positive(_require(run_t, "k", (int, float), "run"), "k")
    t_final = _positive(_require(run_t, "t_final", (int, float), "run"), "t_final")
    _check_multiple(t_final, k, "t_final")

    diagnostic_every = run_t.get("diagnostic_every")
    if diagnostic_every is not None:
        diagnostic_every = _positive(diagnostic_every, "diagnostic_every")
        _check_multiple(diagnostic_every, k, "diagnostic_every")
    snapshot_every = run_t.get("snapshot_every")
    if snapshot_every is not None:
        if snapshot_every == 0:
            snapshot_every = None
        else:
            snapshot_every = _positive(snapshot_every, "snapshot_every")
            _check_multiple(snapshot_every, k, "snapshot_every")

    snapshot_complex = bool(run_t.get("snapshot_complex", False))
    exact_error = bool(run_t.get("exact_error", False))
    if exact_error and preset != "single-soliton":
        raise ConfigError(
            "[run] exact_error is only available with the 'single-soliton' preset"
        )
    if exact_error and float(params.get("mu", 2.0)) != 2.0:
        raise ConfigError(
            "[run] exact_error needs mu = 2: the closed-form trajectory solves "
            "the system only for that value"
        )
    output_dir = str(run_t.get("output_dir", preset))

    return ExperimentConfig(
        dimension=dimension,
        bounds=bounds,
        n=n,
        bc=bc,
        preset=preset,
        preset_params=params,
        alpha=alpha,
        sigma=sigma,
        mu=mu,
        scheme=scheme,
        k=k,
        t_final=t_final,
        diagnostic_every=diagnostic_every,
        snapshot_every=snapshot_every,
        snapshot_complex=snapshot_complex,
        exact_error=exact_error,
        output_dir=output_dir,
    )


def preset_names() -> list[str]:
    """Names of the committed experiment configs."""
    return sorted(p.stem for p in PRESET_DIR.glob("*.toml"))


def load_preset(name: str) -> ExperimentConfig:
    """Load one of the committed experiment configs by name."""
    path = PRESET_DIR / f"{name}.toml"
    if not path.exists():
        raise ConfigError(
            f"unknown experiment preset {name!r}; available: {preset_names()}"
        )
    return load_config(path)


@dataclass(frozen=True, eq=False)
class Problem:
    """Materialized experiment: grid, coefficients, initial state, exact ref."""

    config: ExperimentConfig
    grid: Grid
    system: SystemCoefficients
    state: SystemState
    exact: Callable[[float], np.ndarray] | None

    @property
    def mu(self) -> float:
        return self.config.mu


def build_problem(cfg: ExperimentConfig) -> Problem:
    """Allocate the grid and initial state described by a validated config."""
    grid = Grid.build(cfg.bc, list(cfg.bounds), list(cfg.n), cfg.dimension)
    if cfg.preset == "custom":
        state = model.read_fields(cfg.preset_params["path"], grid)
        system = SystemCoefficients(alpha=np.array(cfg.alpha), sigma=np.array(cfg.sigma))
    else:
        builder = PRESETS[cfg.preset].builder
        try:
            system, state = builder(grid, **cfg.preset_params)
        except ValueError as exc:
            raise ConfigError(f"[initial] {exc}") from None
        if cfg.alpha is not None or cfg.sigma is not None:
            system = SystemCoefficients(
                alpha=np.array(cfg.alpha) if cfg.alpha is not None else system.alpha,
                sigma=np.array(cfg.sigma) if cfg.sigma is not None else system.sigma,
            )

    exact = None
    if cfg.exact_error:
        soliton_args = {
            "mu": cfg.preset_params.get("mu", 2.0),
            "alpha": cfg.preset_params.get("alpha", 1.0),
            "e": cfg.preset_params.get("e", 2.0 / 3.0),
            "v": cfg.preset_params.get("v", 1.0),
        }
        (x,) = grid.coordinates()

        def exact(t: float) -> np.ndarray:
            psi = model.single_soliton_field(x, t, **soliton_args)
            return np.stack([psi, psi])

    return Problem(config=cfg, grid=grid, system=system, state=state, exact=exact)
