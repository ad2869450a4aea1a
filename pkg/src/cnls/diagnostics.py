"""Conserved quantities, error norms and observed convergence orders."""
from __future__ import annotations

import numpy as np

from .grids import Grid
from .model import SystemCoefficients, SystemState
from .transforms import apply_laplacian


def mass(field: np.ndarray, grid: Grid) -> float:
    """Rectangle-rule squared L2 norm ``h^d * sum |psi|^2`` of one component."""
    return grid.cell_volume * float(np.sum(field.real**2 + field.imag**2))


def masses(state: SystemState, grid: Grid) -> np.ndarray:
    """Per-component masses, shape ``(M,)``."""
    intensity = state.fields.real**2 + state.fields.imag**2
    return grid.cell_volume * intensity.reshape(state.m, -1).sum(axis=1)


def energy(state: SystemState, grid: Grid, system: SystemCoefficients, mu: float = 1.0) -> float:
    """Discrete energy functional of the pair-coupled system.

    ``E = (1/(2 mu)) h^d sum_j Re[conj(Psi_j) (-Lap) Psi_j]
    - (1/4) h^d sum [ b_j |Psi_j|^4 + 2 e_i |Psi_{2i-1}|^2 |Psi_{2i}|^2 ]``

    with self-couplings ``b_j = sigma_jj`` and pair couplings
    ``e_i = sigma_{2i-1,2i}``.  Requires an even number of components so
    the quartic cross terms pair off.
    """
    m = state.m
    if m % 2 != 0:
        raise ValueError(f"energy functional requires an even component count, got M={m}")
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu}")
    fields = state.fields
    hd = grid.cell_volume
    lap = apply_laplacian(fields, grid.symbol, grid.bc)
    kinetic = float(np.sum((np.conj(fields) * lap).real)) * hd / (2.0 * mu)
    intensity = fields.real**2 + fields.imag**2
    flat = intensity.reshape(m, -1)
    b = np.diagonal(system.sigma)
    quartic = float(b @ (flat * flat).sum(axis=1))
    for i in range(0, m, 2):
        e_pair = system.sigma[i, i + 1]
        quartic += 2.0 * e_pair * float(np.sum(flat[i] * flat[i + 1]))
    return kinetic - 0.25 * hd * quartic


def linf_error(fields_a: np.ndarray, fields_b: np.ndarray) -> float:
    """Max pointwise difference of moduli between two field stacks.

    Errors compare ``|psi|`` rather than the complex values: the envelope
    is the observable quantity, and accuracy tables built this way exclude
    the secular global-phase drift that otherwise dominates long runs.
    """
    if fields_a.shape != fields_b.shape:
        raise ValueError(f"shape mismatch: {fields_a.shape} vs {fields_b.shape}")
    return float(np.max(np.abs(np.abs(fields_a) - np.abs(fields_b))))


def observed_orders(errors: np.ndarray | list[float]) -> np.ndarray:
    """Observed convergence orders ``log2(err[i-1] / err[i])``.

    Returns an array one shorter than ``errors``; entries are NaN where a
    ratio is undefined (zero or non-finite errors).
    """
    err = np.asarray(errors, dtype=float)
    if err.ndim != 1 or err.size < 2:
        raise ValueError("need at least two errors to measure an order")
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log2(err[:-1] / err[1:])
    usable = np.isfinite(err) & (err > 0)
    orders[~(usable[:-1] & usable[1:])] = np.nan
    return orders
