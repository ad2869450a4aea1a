"""Tensor-product grids and Laplacian eigenvalues for spectral discretizations.

Each supported boundary condition pairs a mesh layout with the discrete
transform that diagonalizes the Laplacian on that mesh:

* periodic  -- uniform mesh ``x_i = a + i*h`` (``i = 0..N-1``, ``h = L/N``),
  diagonalized by the DFT with wavenumbers ``2*pi*gamma/L``.
* dirichlet -- interior mesh ``x_i = a + i*h`` (``i = 1..N``, ``h = L/(N+1)``),
  diagonalized by the type-I sine transform with wavenumbers
  ``(gamma+1)*pi/L``.
* neumann   -- cell-centred mesh ``x_i = a + (i + 1/2)*h`` (``i = 0..N-1``,
  ``h = L/N``), diagonalized by the type-II cosine transform with
  wavenumbers ``gamma*pi/L``.

Eigenvalues are those of ``-Laplacian`` (all non-negative), stored in the
ordering of the matching transform so a field's coefficients can be scaled
directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class BoundaryCondition(str, Enum):
    """Boundary condition, which also selects mesh layout and transform."""

    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True, eq=False)
class AxisGrid:
    """One axis of a tensor-product grid.

    Attributes
    ----------
    bc : BoundaryCondition
        Boundary condition along this axis.
    a, b : float
        Domain endpoints, ``a < b``.
    n : int
        Number of unknowns (grid points carried by the discretization).
    h : float
        Mesh spacing.
    points : ndarray, shape (n,)
        Physical coordinates of the unknowns.
    eigenvalues : ndarray, shape (n,)
        Eigenvalues of ``-d^2/dx^2`` in transform ordering.
    """

    bc: BoundaryCondition
    a: float
    b: float
    n: int
    h: float
    points: np.ndarray
    eigenvalues: np.ndarray


def build_axis(bc: BoundaryCondition | str, a: float, b: float, n: int) -> AxisGrid:
    """Construct one grid axis for the given boundary condition.

    Raises
    ------
    ValueError
        If the endpoints are not finite with ``a < b``, if ``n < 2``, or if
        ``n`` is odd for a periodic axis (the real/complex DFT pairing used
        for the Laplacian requires an even length).
    """
    bc = BoundaryCondition(bc)
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"domain endpoints must be finite, got [{a}, {b}]")
    if not b > a:
        raise ValueError(f"domain endpoints must satisfy a < b, got [{a}, {b}]")
    n = int(n)
    if n < 2:
        raise ValueError(f"need at least 2 grid points per axis, got n={n}")
    length = b - a
    if bc is BoundaryCondition.PERIODIC:
        if n % 2 != 0:
            raise ValueError(f"periodic axes require even n, got n={n}")
        h = length / n
        points = a + h * np.arange(n)
        # DFT ordering 0, 1, ..., n/2, -n/2+1, ..., -1 (Nyquist kept positive).
        gamma = np.concatenate([np.arange(0, n // 2 + 1), np.arange(-n // 2 + 1, 0)])
        eigenvalues = (2.0 * np.pi * gamma / length) ** 2
    elif bc is BoundaryCondition.DIRICHLET:
        h = length / (n + 1)
        points = a + h * np.arange(1, n + 1)
        eigenvalues = (np.pi * np.arange(1, n + 1) / length) ** 2
    else:  # NEUMANN
        h = length / n
        points = a + h * (np.arange(n) + 0.5)
        eigenvalues = (np.pi * np.arange(n) / length) ** 2
    points = np.ascontiguousarray(points, dtype=np.float64)
    eigenvalues = np.ascontiguousarray(eigenvalues, dtype=np.float64)
    return AxisGrid(bc=bc, a=a, b=b, n=n, h=h, points=points, eigenvalues=eigenvalues)


def laplacian_symbol(axes: tuple[AxisGrid, ...] | list[AxisGrid]) -> np.ndarray:
    """Eigenvalues of ``-Laplacian`` on the tensor-product grid.

    Returns an array of shape ``(n_1, ..., n_d)`` whose entry at a
    multi-index is the sum of the per-axis eigenvalues, i.e. the multiplier
    that ``-Laplacian`` applies to the matching transform coefficient.
    """
    if len(axes) == 0:
        raise ValueError("need at least one axis")
    d = len(axes)
    symbol = np.zeros(tuple(ax.n for ax in axes))
    for i, ax in enumerate(axes):
        shape = [1] * d
        shape[i] = ax.n
        symbol = symbol + ax.eigenvalues.reshape(shape)
    return symbol


@dataclass(frozen=True, eq=False)
class Grid:
    """Tensor-product grid with a shared boundary condition on every axis."""

    axes: tuple[AxisGrid, ...]
    symbol: np.ndarray

    @classmethod
    def build(
        cls,
        bc: BoundaryCondition | str,
        bounds: tuple[float, float] | list[tuple[float, float]],
        n: int | list[int],
        dimension: int,
    ) -> "Grid":
        """Build a ``dimension``-dimensional grid.

        ``bounds`` may be one ``(a, b)`` pair shared by all axes or one pair
        per axis; likewise ``n`` may be shared or per-axis.
        """
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        if isinstance(bounds, tuple) and len(bounds) == 2 and np.isscalar(bounds[0]):
            bounds = [bounds] * dimension
        if np.isscalar(n):
            n = [int(n)] * dimension
        if len(bounds) != dimension or len(n) != dimension:
            raise ValueError("bounds and n must match the grid dimension")
        axes = tuple(build_axis(bc, a, b, ni) for (a, b), ni in zip(bounds, n))
        return cls(axes=axes, symbol=laplacian_symbol(axes))

    @property
    def bc(self) -> BoundaryCondition:
        return self.axes[0].bc

    @property
    def dimension(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.n for ax in self.axes)

    @property
    def cell_volume(self) -> float:
        """Volume element ``h_1 * ... * h_d`` of the rectangle rule."""
        return math.prod(ax.h for ax in self.axes)

    def coordinates(self) -> tuple[np.ndarray, ...]:
        """Per-axis coordinate arrays broadcastable to the grid shape."""
        return tuple(
            ax.points.reshape([-1 if i == j else 1 for j in range(self.dimension)])
            for i, ax in enumerate(self.axes)
        )
