"""Fourth-order exponential time steppers for the transformed system.

In the transform basis the system becomes ``d psihat_j/dt + A_j psihat_j =
Fhat_j`` with ``A_j = i alpha_j Lambda`` diagonal, where ``Lambda`` holds
the Laplacian eigenvalues and ``Fhat`` is the transform of the pointwise
nonlinear term.  Both steppers below replace the exponentials of the
classical exponential Runge-Kutta formulas with rational approximants
(:mod:`cnls.pade`), so a step costs a handful of elementwise array
operations plus eight transforms, independent of dimension.

* :class:`KrogstadP22` -- Krogstad's four-stage exponential scheme with all
  exponential weights replaced by (2,2)-based rationals.
* :class:`IFRK4P13` -- integrating-factor RK4 with the integrating factor
  replaced by (1,3) rationals.

With zero dispersion (``A = 0``) both collapse to classical RK4; with zero
nonlinearity a step is exactly an elementwise multiplication by the
approximant of ``exp(-kA)``.

:func:`integrate` drives repeated steps with divergence detection and an
observer callback, keeping the state in the coefficient basis between
steps so the linear part is applied without transform round-trips.
"""
from __future__ import annotations

import warnings
from typing import Callable

import numpy as np

from . import pade, transforms
from .grids import Grid
from .model import SystemCoefficients, SystemState, nonlinear_rhs

SCHEMES = ("krogstad-p22", "ifrk4-p13")

#: Classical convergence order shared by both time steppers.
DESIGN_ORDER = 4

#: Any state whose max modulus exceeds this is reported as divergence.
DIVERGENCE_THRESHOLD = 1.0e8


class DivergenceError(RuntimeError):
    """Raised when a field stops being finite or exceeds the modulus bound."""

    def __init__(self, step: int, time: float, max_modulus: float):
        self.step = step
        self.time = time
        self.max_modulus = max_modulus
        super().__init__(
            f"solution diverged at step {step} (t={time:.6g}): "
            f"max modulus {max_modulus:.3e}"
        )


class _SpectralStepper:
    """Shared machinery: transform plumbing and rational operator tables.

    Parameters
    ----------
    grid : Grid
        Spatial grid; selects the transform pair and Laplacian eigenvalues.
    system : SystemCoefficients
        Dispersion and coupling coefficients.
    k : float
        Time step.
    rhs : callable, optional
        Explicit right-hand side ``fields -> G(fields)`` evaluated in
        physical space.  Defaults to the cubic coupling of ``system``.
    thetas : ndarray, optional
        Override for the dispersion spectrum ``theta`` with ``z = i*theta``
        (shape broadcastable to the fields); used by the stability map to
        drive the stepper with an arbitrary linear part.
    """

    def __init__(
        self,
        grid: Grid,
        system: SystemCoefficients,
        k: float,
        rhs: Callable[[np.ndarray], np.ndarray] | None = None,
        thetas: np.ndarray | None = None,
    ):
        if k <= 0:
            raise ValueError(f"time step must be positive, got k={k}")
        self.grid = grid
        self.system = system
        self.k = float(k)
        if rhs is None:
            sigma = system.sigma
            rhs = lambda fields: nonlinear_rhs(fields, sigma)
        self.rhs = rhs
        if thetas is None:
            thetas = pade.dispersion_thetas(self.k, system.alpha, grid.symbol)
        self._axes = tuple(range(1, grid.dimension + 1))
        self._build_tables(np.asarray(thetas))

    def _build_tables(self, thetas: np.ndarray) -> None:
        raise NotImplementedError

    def _forward(self, fields: np.ndarray) -> np.ndarray:
        return transforms.forward(fields, self.grid.bc, axes=self._axes)

    def _inverse(self, coeffs: np.ndarray) -> np.ndarray:
        return transforms.inverse(coeffs, self.grid.bc, axes=self._axes)

    def step_pair(self, psi_hat: np.ndarray, psi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Advance one step given matching coefficient/physical states."""
        raise NotImplementedError

    def step(self, state: SystemState) -> SystemState:
        """Advance a physical-space state by one time step."""
        psi_hat = self._forward(state.fields)
        _, psi = self.step_pair(psi_hat, state.fields)
        return SystemState(time=state.time + self.k, fields=psi)


class KrogstadP22(_SpectralStepper):
    """Krogstad's exponential RK4 with (2,2) rational weights."""

    def _build_tables(self, thetas: np.ndarray) -> None:
        self.tables = pade.krogstad_tables_imag(self.k, thetas)

    def step_pair(self, psi_hat, psi):
        t = self.tables
        f0 = self._forward(self.rhs(psi))
        base_half = t.r_half * psi_hat + t.p1_half * f0
        fa = self._forward(self.rhs(self._inverse(base_half)))
        fb = self._forward(self.rhs(self._inverse(base_half + t.p2_half * (fa - f0))))
        base_full = t.r * psi_hat + t.p1 * f0
        fc = self._forward(self.rhs(self._inverse(base_full + 2.0 * t.p2 * (fb - f0))))
        psi_hat_next = (
            base_full
            + t.p2 * (2.0 * fa + 2.0 * fb - fc - 3.0 * f0)
            + t.p3 * (f0 - fa - fb + fc)
        )
        return psi_hat_next, self._inverse(psi_hat_next)


class IFRK4P13(_SpectralStepper):
    """Integrating-factor RK4 with (1,3) rational integrating factors."""

    def _build_tables(self, thetas: np.ndarray) -> None:
        self.tables = pade.ifrk4_tables_imag(self.k, thetas)

    def step_pair(self, psi_hat, psi):
        t = self.tables
        k = self.k
        f0 = self._forward(self.rhs(psi))
        fa = self._forward(self.rhs(self._inverse(t.r_half * (psi_hat + 0.5 * k * f0))))
        fb = self._forward(self.rhs(self._inverse(t.r_half * psi_hat + 0.5 * k * fa)))
        fc = self._forward(self.rhs(self._inverse(t.r * psi_hat + k * (t.r_half * fb))))
        psi_hat_next = t.r * psi_hat + k * (
            (t.r * f0 + fc) / 6.0 + (t.r_half * (fa + fb)) / 3.0
        )
        return psi_hat_next, self._inverse(psi_hat_next)


_STEPPER_CLASSES = {"krogstad-p22": KrogstadP22, "ifrk4-p13": IFRK4P13}


def make_stepper(
    scheme: str,
    grid: Grid,
    system: SystemCoefficients,
    k: float,
    rhs: Callable[[np.ndarray], np.ndarray] | None = None,
    thetas: np.ndarray | None = None,
) -> _SpectralStepper:
    """Instantiate a stepper by scheme name (see :data:`SCHEMES`)."""
    try:
        cls = _STEPPER_CLASSES[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}") from None
    return cls(grid, system, k, rhs=rhs, thetas=thetas)


def step_count(k: float, t_final: float) -> int:
    """Number of steps covering ``[0, t_final]``; ``t_final/k`` must be integral."""
    n = round(t_final / k)
    if n < 1 or abs(n * k - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError(
            f"final time {t_final} is not an integer multiple of the step k={k}"
        )
    return n


def integrate(
    state: SystemState,
    grid: Grid,
    system: SystemCoefficients,
    scheme: str,
    k: float,
    t_final: float,
    observer: Callable[[int, SystemState], None] | None = None,
    observe_every: int | None = None,
    divergence_threshold: float = DIVERGENCE_THRESHOLD,
) -> SystemState:
    """Advance ``state`` from its current time through ``t_final`` time units.

    Parameters
    ----------
    observer : callable, optional
        Called as ``observer(step_index, state)`` at step 0 (initial state),
        every ``observe_every`` steps, and at the final step.
    observe_every : int, optional
        Observation cadence in steps (defaults to "initial and final only").

    Raises
    ------
    DivergenceError
        If any field value becomes non-finite or its modulus exceeds
        ``divergence_threshold``; the exception records the step index.
    """
    n_steps = step_count(k, t_final)
    if state.fields.shape != (system.m,) + grid.shape:
        raise ValueError(
            f"state shape {state.fields.shape} does not match "
            f"{system.m} components on grid {grid.shape}"
        )
    stepper = make_stepper(scheme, grid, system, k)
    if observe_every is not None and observe_every < 1:
        raise ValueError(f"observe_every must be >= 1, got {observe_every}")
    if observer is not None and observe_every is not None and n_steps % observe_every != 0:
        warnings.warn(
            f"observation cadence {observe_every} does not divide {n_steps} steps; "
            "the last interval is clipped to the final step",
            stacklevel=2,
        )

    t0 = state.time
    psi = state.fields
    if observer is not None:
        observer(0, SystemState(time=t0, fields=psi))
    psi_hat = stepper._forward(psi)
    for n in range(1, n_steps + 1):
        psi_hat, psi = stepper.step_pair(psi_hat, psi)
        max_modulus = float(np.max(np.abs(psi)))
        if not np.isfinite(max_modulus) or max_modulus > divergence_threshold:
            raise DivergenceError(step=n, time=t0 + n * k, max_modulus=max_modulus)
        if observer is not None and (
            n == n_steps or (observe_every is not None and n % observe_every == 0)
        ):
            observer(n, SystemState(time=t0 + n * k, fields=psi))
    return SystemState(time=t0 + n_steps * k, fields=psi)
