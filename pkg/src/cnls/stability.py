"""Linear stability map of the integrating-factor stepper.

For the scalar test problem ``du/dt = -c u + lambda u`` one step of the
integrating-factor scheme multiplies ``u`` by an amplification factor
``r(x, y)`` depending only on ``x = lambda*k`` (explicit part) and
``y = -c*k`` (exponentially treated part).  :func:`amplification` obtains
``r`` by executing the production stepper on a one-point grid -- so the
map certifies the shipped code path -- and cross-checks the result against
the closed form

    r = R (1 + x/3) + Rt^2 [ (x/3)(1 + x/2) + (x/3) q + (x^2/6) q ],
    q = 1 + x/2 + x^2/4,   R = r13(-y),   Rt = r13_tilde(-y),

which reduces to the classical RK4 growth polynomial
``1 + x + x^2/2 + x^3/6 + x^4/24`` at ``y = 0``.

:func:`stability_region` samples ``|r|`` over a rectangle of ``x`` values
(closed form for the bulk, executed stepper on a deterministic subsample)
and reports the stable area ``|r| <= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pade
from .grids import AxisGrid, BoundaryCondition, Grid
from .model import SystemCoefficients
from .steppers import IFRK4P13

#: Executed-stepper and closed-form values must agree this tightly.
CROSS_CHECK_TOL = 1.0e-9


def _point_grid() -> Grid:
    """A one-point periodic 'grid' on which every transform is the identity."""
    axis = AxisGrid(
        bc=BoundaryCondition.PERIODIC,
        a=0.0,
        b=1.0,
        n=1,
        h=1.0,
        points=np.zeros(1),
        eigenvalues=np.zeros(1),
    )
    return Grid(axes=(axis,), symbol=np.zeros(1))


def amplification_closed(x, y):
    """Closed-form amplification factor; elementwise over arrays."""
    x = np.asarray(x, dtype=complex)
    z = -np.asarray(y, dtype=complex)
    big_r = pade.r13(z)
    big_rt = pade.r13_tilde(z)
    q = 1.0 + 0.5 * x + 0.25 * x * x
    return big_r * (1.0 + x / 3.0) + big_rt * big_rt * (
        (x / 3.0) * (1.0 + 0.5 * x) + (x / 3.0) * q + (x * x / 6.0) * q
    )


def amplification_stepper(x: complex, y: complex) -> complex:
    """Amplification factor measured by one step of the production stepper.

    Runs :class:`~cnls.steppers.IFRK4P13` with ``k = 1`` on a one-point
    grid, with the dispersive operator pinned to ``kA = -y`` and the
    explicit right-hand side replaced by ``u -> lambda u`` (``lambda = x``).
    """
    lam = complex(x)
    grid = _point_grid()
    system = SystemCoefficients(alpha=np.zeros(1), sigma=np.zeros((1, 1)))
    # z = i*theta = -y  =>  theta = i*y.
    thetas = np.full((1, 1), 1j * complex(y))
    stepper = IFRK4P13(grid, system, k=1.0, rhs=lambda f: lam * f, thetas=thetas)
    psi = np.ones((1, 1), dtype=complex)
    psi_hat = stepper._forward(psi)
    _, psi_next = stepper.step_pair(psi_hat, psi)
    return complex(psi_next[0, 0])


def amplification(x: complex, y: complex, check: bool = True) -> complex:
    """Amplification factor ``r(x, y)`` via the executed stepper.

    With ``check=True`` (default) the value is cross-checked against the
    closed form; disagreement beyond :data:`CROSS_CHECK_TOL` raises
    ``ArithmeticError``, since it would mean the shipped step algebra and
    its analysis have drifted apart.
    """
    r = amplification_stepper(x, y)
    if check:
        rc = complex(amplification_closed(x, y))
        if abs(r - rc) > CROSS_CHECK_TOL:
            raise ArithmeticError(
                f"executed-stepper amplification {r} deviates from closed form "
                f"{rc} at x={x}, y={y}"
            )
    return r


@dataclass(frozen=True, eq=False)
class StabilityMap:
    """Sampled ``|r|`` over a rectangle of ``x = lambda k`` values.

    ``abs_r[i, j]`` corresponds to ``x = x_re[j] + 1j * x_im[i]``.
    """

    y: complex
    x_re: np.ndarray
    x_im: np.ndarray
    abs_r: np.ndarray

    @property
    def cell_area(self) -> float:
        dx = self.x_re[1] - self.x_re[0] if self.x_re.size > 1 else 1.0
        dy = self.x_im[1] - self.x_im[0] if self.x_im.size > 1 else 1.0
        return float(dx * dy)

    @property
    def stable_area(self) -> float:
        """Area covered by sample cells with ``|r| <= 1``."""
        return float(np.count_nonzero(self.abs_r <= 1.0)) * self.cell_area

    @property
    def stable_cells(self) -> int:
        return int(np.count_nonzero(self.abs_r <= 1.0))


def stability_region(
    y: complex,
    window: tuple[float, float, float, float] = (-6.0, 1.0, -5.0, 5.0),
    resolution: int | tuple[int, int] = (141, 201),
    spot_checks: int = 9,
) -> StabilityMap:
    """Sample ``|r(x, y)|`` for ``x`` over ``window = (re0, re1, im0, im1)``.

    The bulk is evaluated with the closed form; ``spot_checks`` samples
    spread deterministically over the window are re-measured by executing
    the stepper and must agree to :data:`CROSS_CHECK_TOL`.
    """
    re0, re1, im0, im1 = window
    if not (re1 > re0 and im1 > im0):
        raise ValueError(f"empty stability window {window}")
    if np.isscalar(resolution):
        n_re = n_im = int(resolution)
    else:
        n_re, n_im = (int(r) for r in resolution)
    if n_re < 16 or n_im < 16:
        raise ValueError(f"resolution must be >= 16 per axis, got {resolution}")
    x_re = np.linspace(re0, re1, n_re)
    x_im = np.linspace(im0, im1, n_im)
    x = x_re[np.newaxis, :] + 1j * x_im[:, np.newaxis]
    abs_r = np.abs(amplification_closed(x, y))
    flat = x.ravel()
    for idx in np.linspace(0, flat.size - 1, max(spot_checks, 1)).astype(int):
        amplification(flat[idx], y)  # raises on disagreement
    return StabilityMap(y=complex(y), x_re=x_re, x_im=x_im, abs_r=abs_r)
