"""Coupled nonlinear Schrodinger systems: coefficients, states and presets.

The systems solved here have the form

    i dPsi_j/dt - alpha_j * (-Laplacian) Psi_j
        + (sum_m sigma_jm |Psi_m|^2) Psi_j = 0,    j = 1..M,

on a rectangle in 1, 2 or 3 space dimensions.  After moving the dispersive
term to a diagonal operator in the transform basis the remaining explicit
right-hand side is ``G_j = i (sum_m sigma_jm |Psi_m|^2) Psi_j``, evaluated
pointwise in physical space by :func:`nonlinear_rhs`.

The preset constructors build the initial fields *and* the matching
coefficient set for the standard experiments: a translating two-component
soliton with a closed-form solution, two- and four-component soliton
collisions, colliding 2-D/3-D Gaussian wave packets, and a stationary
pair of solitons under a dispersionless focusing nonlinearity.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grids import Grid


@dataclass(frozen=True, eq=False)
class SystemCoefficients:
    """Dispersion coefficients ``alpha_j`` and coupling matrix ``sigma_jm``."""

    alpha: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        alpha = np.ascontiguousarray(self.alpha, dtype=np.float64)
        sigma = np.ascontiguousarray(self.sigma, dtype=np.float64)
        if alpha.ndim != 1 or alpha.size < 1:
            raise ValueError("alpha must be a non-empty 1-D array")
        m = alpha.size
        if sigma.shape != (m, m):
            raise ValueError(f"sigma must have shape ({m}, {m}), got {sigma.shape}")
        if not (np.all(np.isfinite(alpha)) and np.all(np.isfinite(sigma))):
            raise ValueError("alpha and sigma must be finite")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "sigma", sigma)

    @property
    def m(self) -> int:
        return self.alpha.size


@dataclass
class SystemState:
    """Fields of all components at one time; ``fields[j]`` is component j."""

    time: float
    fields: np.ndarray

    def __post_init__(self):
        self.fields = np.ascontiguousarray(self.fields, dtype=np.complex128)
        if self.fields.ndim < 2:
            raise ValueError("fields must have shape (M, *grid_shape)")

    @property
    def m(self) -> int:
        return self.fields.shape[0]


def nonlinear_rhs(fields: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Explicit right-hand side ``G_j = i (sum_m sigma_jm |Psi_m|^2) Psi_j``."""
    if sigma.shape[0] != fields.shape[0]:
        raise ValueError(
            f"coupling matrix is {sigma.shape[0]}x{sigma.shape[1]} but the state "
            f"has {fields.shape[0]} components"
        )
    intensity = fields.real**2 + fields.imag**2
    coupling = np.tensordot(sigma, intensity, axes=1)
    return 1j * (coupling * fields)


def sech(u: np.ndarray) -> np.ndarray:
    return 1.0 / np.cosh(u)


# ---------------------------------------------------------------------------
# Presets
# ---------------------------------------------------------------------------

def coupling_matrix(m: int, diagonal: float, off_diagonal: float) -> np.ndarray:
    """Symmetric coupling with one self- and one cross-interaction strength."""
    sigma = np.full((m, m), float(off_diagonal))
    np.fill_diagonal(sigma, float(diagonal))
    return sigma


def single_soliton_field(x: np.ndarray, t: float, mu: float, alpha: float, e: float, v: float) -> np.ndarray:
    """Closed-form translating soliton shared by both components.

    ``sqrt(mu*alpha/(1+e)) * sech(sqrt(mu*alpha)(x - v t))
    * exp(i(v x - (v^2/2 - alpha) t))``.  For ``mu = 2`` this solves the
    two-component system built by :func:`single_soliton` exactly.
    """
    if mu * alpha <= 0.0 or 1.0 + e <= 0.0:
        raise ValueError(
            f"need mu*alpha > 0 and 1 + e > 0, got mu*alpha={mu * alpha}, e={e}"
        )
    amplitude = np.sqrt(mu * alpha / (1.0 + e))
    width = np.sqrt(mu * alpha)
    phase = v * x - (0.5 * v * v - alpha) * t
    return amplitude * sech(width * (x - v * t)) * np.exp(1j * phase)


def single_soliton(
    grid: Grid, mu: float = 2.0, alpha: float = 1.0, e: float = 2.0 / 3.0, v: float = 1.0
) -> tuple[SystemCoefficients, SystemState]:
    """Two equal components carrying one translating soliton (1-D).

    System: ``alpha_j = 1/mu``, self-coupling 1, cross-coupling ``e``.

    Raises
    ------
    ValueError
        If ``mu * alpha <= 0`` (no real soliton width) or ``1 + e <= 0``
        (no real amplitude).
    """
    if mu * alpha <= 0.0:
        raise ValueError(f"need mu*alpha > 0 for a real soliton width, got {mu * alpha}")
    if 1.0 + e <= 0.0:
        raise ValueError(f"need 1 + e > 0 for a real amplitude, got e={e}")
    (x,) = grid.coordinates()
    psi = single_soliton_field(x, 0.0, mu, alpha, e, v)
    coeffs = SystemCoefficients(
        alpha=np.array([1.0 / mu, 1.0 / mu]), sigma=coupling_matrix(2, 1.0, e)
    )
    return coeffs, SystemState(time=0.0, fields=np.stack([psi, psi]))


def two_soliton(
    grid: Grid,
    r1: float = 1.2,
    r2: float = 1.0,
    v1: float = 0.25,
    v2: float = -0.25,
    x10: float = 30.0,
    x20: float = -10.0,
    e: float = 1.0,
    mu: float = 1.0,
) -> tuple[SystemCoefficients, SystemState]:
    """Two counter-propagating solitons, one per component (1-D).

    ``Psi_j = sqrt(2) r_j sech(r_j x + x_j0) exp(i v_j x)`` with signed
    velocities ``v_j``.
    """
    (x,) = grid.coordinates()
    psi1 = np.sqrt(2.0) * r1 * sech(r1 * x + x10) * np.exp(1j * v1 * x)
    psi2 = np.sqrt(2.0) * r2 * sech(r2 * x + x20) * np.exp(1j * v2 * x)
    coeffs = SystemCoefficients(
        alpha=np.array([1.0 / mu, 1.0 / mu]), sigma=coupling_matrix(2, 1.0, e)
    )
    return coeffs, SystemState(time=0.0, fields=np.stack([psi1, psi2]))


def four_soliton(
    grid: Grid,
    r: tuple[float, float, float, float] = (1.0, 1.2, 1.3, 1.4),
    v: tuple[float, float, float, float] = (0.125, 0.125, 0.25, 0.25),
    x10: float = 10.0,
    x30: float = 30.0,
    b: float = 1.0,
    e: float = 1.0,
) -> tuple[SystemCoefficients, SystemState]:
    """Four solitons in two counter-propagating pairs (1-D).

    Components 1 and 3 start shifted left and travel right; components 2
    and 4 mirror them with opposite phase velocity:

    ``Psi_1 = sqrt(2) r_1 sech(r_1 x + x10) exp(+i v_1 x)``
    ``Psi_2 = sqrt(2) r_2 sech(r_2 x - x10) exp(-i v_2 x)``
    ``Psi_3 = sqrt(2) r_3 sech(r_3 x + x30) exp(+i v_3 x)``
    ``Psi_4 = sqrt(2) r_4 sech(r_4 x - x30) exp(-i v_4 x)``

    Self-coupling ``b``, cross-coupling ``e``.
    """
    (x,) = grid.coordinates()
    root2 = np.sqrt(2.0)
    fields = np.stack(
        [
            root2 * r[0] * sech(r[0] * x + x10) * np.exp(1j * v[0] * x),
            root2 * r[1] * sech(r[1] * x - x10) * np.exp(-1j * v[1] * x),
            root2 * r[2] * sech(r[2] * x + x30) * np.exp(1j * v[2] * x),
            root2 * r[3] * sech(r[3] * x - x30) * np.exp(-1j * v[3] * x),
        ]
    )
    coeffs = SystemCoefficients(alpha=np.ones(4), sigma=coupling_matrix(4, b, e))
    return coeffs, SystemState(time=0.0, fields=fields)


def four_wave_2d(
    grid: Grid,
    offset: float = 3.0,
    self_coupling: float = 1.0,
    cross_coupling: float = 3.0,
) -> tuple[SystemCoefficients, SystemState]:
    """Four chirped Gaussian packets colliding at the origin (2-D).

    Each component is ``(2/sqrt(pi)) exp(-[(x - cx)^2 + (y - cy)^2])
    * exp(-i(x^2 + y^2))`` with the four corner placements
    ``(c, c), (-c, -c), (c, -c), (-c, c)``; the common quadratic phase
    focuses all packets toward the origin.
    """
    x, y = grid.coordinates()
    c = offset
    amp = 2.0 / np.sqrt(np.pi)
    chirp = np.exp(-1j * (x**2 + y**2))

    def packet(cx, cy):
        return amp * np.exp(-((x - cx) ** 2 + (y - cy) ** 2)) * chirp

    fields = np.stack([packet(c, c), packet(-c, -c), packet(c, -c), packet(-c, c)])
    coeffs = SystemCoefficients(
        alpha=np.ones(4), sigma=coupling_matrix(4, self_coupling, cross_coupling)
    )
    return coeffs, SystemState(time=0.0, fields=fields)


def four_wave_3d(
    grid: Grid,
    offset: float = 3.0,
    self_coupling: float = 1.0,
    cross_coupling: float = 3.0,
) -> tuple[SystemCoefficients, SystemState]:
    """Four chirped Gaussian packets colliding at the origin (3-D)."""
    x, y, z = grid.coordinates()
    c = offset
    amp = 2.0 / np.sqrt(np.pi)
    chirp = np.exp(-1j * (x**2 + y**2 + z**2))

    def packet(cx, cy, cz):
        return amp * np.exp(-((x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2)) * chirp

    fields = np.stack(
        [
            packet(c, c, c),
            packet(-c, -c, -c),
            packet(c, -c, c),
            packet(-c, c, -c),
        ]
    )
    coeffs = SystemCoefficients(
        alpha=np.ones(4), sigma=coupling_matrix(4, self_coupling, cross_coupling)
    )
    return coeffs, SystemState(time=0.0, fields=fields)


def write_fields(path, state: SystemState, grid: Grid) -> None:
    """Write sampled component fields with a small self-describing header.

    ``.csv`` paths get a text format: a header line ``M,d,N,bc`` (``N`` is
    ``x``-joined per axis) followed by one row per grid point in row-major
    order, columns ``re_1,im_1,...,re_M,im_M``.  Any other extension gets a
    binary format: one JSON header line, then the raw complex128 bytes of
    the ``(M, *grid_shape)`` array in C order.
    """
    path = Path(path)
    fields = np.ascontiguousarray(state.fields, dtype=np.complex128)
    m = fields.shape[0]
    n_txt = "x".join(str(n) for n in grid.shape)
    if path.suffix.lower() == ".csv":
        flat = fields.reshape(m, -1)
        columns = np.empty((flat.shape[1], 2 * m))
        columns[:, 0::2] = flat.real.T
        columns[:, 1::2] = flat.imag.T
        header = f"{m},{grid.dimension},{n_txt},{grid.bc.value}"
        np.savetxt(path, columns, delimiter=",", header=header, comments="")
    else:
        meta = {
            "m": m,
            "d": grid.dimension,
            "n": list(grid.shape),
            "bc": grid.bc.value,
        }
        with open(path, "wb") as f:
            f.write((json.dumps(meta) + "\n").encode("ascii"))
            f.write(fields.tobytes(order="C"))


def read_fields_header(path) -> tuple[int, int, tuple[int, ...], str]:
    """Read only the ``(M, d, shape, bc)`` header of a sampled-field file."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path) as f:
            header = f.readline().strip()
        parts = header.split(",")
        if len(parts) != 4:
            raise ValueError(f"malformed field-file header {header!r}")
        m, d, bc = int(parts[0]), int(parts[1]), parts[3]
        shape = tuple(int(s) for s in parts[2].split("x"))
    else:
        with open(path, "rb") as f:
            meta = json.loads(f.readline())
        m, d, bc = int(meta["m"]), int(meta["d"]), meta["bc"]
        shape = tuple(int(s) for s in meta["n"])
    return m, d, shape, bc


def read_fields(path, grid: Grid) -> SystemState:
    """Read fields written by :func:`write_fields`, validating the header.

    Raises
    ------
    ValueError
        If the header's dimension, shape or boundary condition disagrees
        with ``grid``, or the payload size does not match.
    """
    path = Path(path)
    m, d, shape, bc = read_fields_header(path)
    if d != grid.dimension or shape != grid.shape or bc != grid.bc.value:
        raise ValueError(
            f"field file was sampled on d={d}, N={shape}, bc={bc}; "
            f"the configured grid is d={grid.dimension}, N={grid.shape}, "
            f"bc={grid.bc.value}"
        )
    n_points = int(np.prod(shape))
    if path.suffix.lower() == ".csv":
        columns = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        if columns.shape[1] != 2 * m:
            raise ValueError(
                f"field file declares M={m} but has {columns.shape[1]} columns"
            )
        flat = (columns[:, 0::2] + 1j * columns[:, 1::2]).T
    else:
        with open(path, "rb") as f:
            f.readline()
            payload = f.read()
        flat = np.frombuffer(payload, dtype=np.complex128)
        if flat.size != m * n_points:
            raise ValueError(
                f"field file payload has {flat.size} values, expected {m * n_points}"
            )
        flat = flat.reshape(m, -1)
    if flat.shape[1] != n_points:
        raise ValueError(
            f"field file has {flat.shape[1]} points per component, "
            f"expected {n_points}"
        )
    return SystemState(time=0.0, fields=flat.reshape((m,) + shape))


def blow_up_pair(grid: Grid, strength: float = 2.0) -> tuple[SystemCoefficients, SystemState]:
    """Single component, zero dispersion, focusing self-interaction (1-D).

    ``Psi_1 = exp(2i(x+10)) sech(x+10) + exp(-2i(x-10)) sech(x-10)``.
    With ``alpha_1 = 0`` every grid point evolves by pure phase rotation,
    which exercises long-run nonlinear stability of the steppers.
    """
    (x,) = grid.coordinates()
    psi = np.exp(2j * (x + 10.0)) * sech(x + 10.0) + np.exp(-2j * (x - 10.0)) * sech(x - 10.0)
    coeffs = SystemCoefficients(alpha=np.zeros(1), sigma=np.array([[strength]]))
    return coeffs, SystemState(time=0.0, fields=psi[np.newaxis])
