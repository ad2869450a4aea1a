"""Fourier-spectral exponential Runge-Kutta solver for coupled NLS systems.

The package simulates systems of M coupled nonlinear Schrodinger equations

    i dPsi_j/dt - alpha_j (-Laplacian) Psi_j
        + (sum_m sigma_jm |Psi_m|^2) Psi_j = 0,    j = 1..M,

on rectangles in 1, 2 or 3 dimensions with periodic, homogeneous Dirichlet
or homogeneous Neumann boundary conditions.  Space is discretized with the
transform that diagonalizes the Laplacian for the chosen boundary condition
(FFT / sine / cosine); time is advanced by fourth-order exponential
Runge-Kutta steppers whose exponentials are replaced by rational
approximants, giving O(N^d log N) work per step.

Typical use::

    from cnls import Grid, single_soliton, integrate

    grid = Grid.build("periodic", (-20.0, 80.0), 1024, dimension=1)
    system, state = single_soliton(grid)
    final = integrate(state, grid, system, scheme="krogstad-p22",
                      k=1 / 160, t_final=5.0)

The :mod:`cnls.cli` module exposes the same functionality as the ``cnls``
command with ``simulate``, ``converge-time``, ``converge-space`` and
``stability-map`` subcommands driven by TOML config files.
"""
from .diagnostics import energy, linf_error, mass, masses, observed_orders
from .grids import AxisGrid, BoundaryCondition, Grid, build_axis, laplacian_symbol
from .model import (
    SystemCoefficients,
    SystemState,
    blow_up_pair,
    coupling_matrix,
    four_soliton,
    four_wave_2d,
    four_wave_3d,
    nonlinear_rhs,
    read_fields,
    read_fields_header,
    single_soliton,
    single_soliton_field,
    two_soliton,
    write_fields,
)
from .stability import StabilityMap, amplification, stability_region
from .steppers import (
    SCHEMES,
    DivergenceError,
    IFRK4P13,
    KrogstadP22,
    integrate,
    make_stepper,
    step_count,
)
from .transforms import apply_laplacian, forward, inverse

__version__ = "0.1.0"

__all__ = [
    "AxisGrid",
    "BoundaryCondition",
    "DivergenceError",
    "Grid",
    "IFRK4P13",
    "KrogstadP22",
    "SCHEMES",
    "StabilityMap",
    "SystemCoefficients",
    "SystemState",
    "amplification",
    "apply_laplacian",
    "blow_up_pair",
    "build_axis",
    "coupling_matrix",
    "energy",
    "forward",
    "four_soliton",
    "four_wave_2d",
    "four_wave_3d",
    "integrate",
    "inverse",
    "laplacian_symbol",
    "linf_error",
    "mass",
    "masses",
    "make_stepper",
    "nonlinear_rhs",
    "observed_orders",
    "read_fields",
    "read_fields_header",
    "single_soliton",
    "single_soliton_field",
    "stability_region",
    "step_count",
    "two_soliton",
    "write_fields",
    "__version__",
]
