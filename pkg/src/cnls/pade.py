"""Rational approximants of the matrix exponential used by the steppers.

Both time steppers advance the transformed system ``du/dt + A u = F(u)``
with ``A`` diagonal, so every operator they need is an elementwise rational
function of ``z = k * A_diag``.  This module provides those functions:

* ``r22`` / ``r22_tilde``  -- (2,2) Pade approximants of ``exp(-z)`` and
  ``exp(-z/2)`` sharing the denominators of the ``p*`` weight functions;
* ``p1 .. p3``, ``p1_tilde``, ``p2_tilde`` -- the stage/update weights of
  the Krogstad scheme built on the same denominators;
* ``r13`` / ``r13_tilde`` -- (1,3) Pade approximants of ``exp(-z)`` and
  ``exp(-z/2)`` used by the integrating-factor scheme.

All functions accept scalars or arrays and evaluate elementwise.  For the
purely imaginary arguments ``z = i*theta`` that arise from the dispersive
term, :func:`krogstad_tables_imag` and :func:`ifrk4_tables_imag` evaluate
numerator and denominator through their real/imaginary parts; for the
(2,2) family the numerator is exactly the conjugate of the denominator, so
the computed factor has unit modulus to a few ulps no matter how large
``theta`` grows.

Polynomial coefficients are exposed as module constants (ascending powers)
so tests can re-evaluate the same rationals in extended precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Ascending-power coefficients.  den22/den22h also serve as the p* weights'
# denominators; num mirrors den with odd powers negated, i.e. num(i*t) is
# the complex conjugate of den(i*t).
R22_NUM = (12.0, -6.0, 1.0)
R22_DEN = (12.0, 6.0, 1.0)
R22H_NUM = (48.0, -12.0, 1.0)
R22H_DEN = (48.0, 12.0, 1.0)
R13_NUM = (24.0, -6.0)
R13_DEN = (24.0, 18.0, 6.0, 1.0)
R13H_NUM = (192.0, -24.0)
R13H_DEN = (192.0, 72.0, 12.0, 1.0)


def _polyval(coeffs: tuple[float, ...], z):
    """Horner evaluation of an ascending-coefficient polynomial."""
    result = np.zeros_like(np.asarray(z, dtype=complex))
    for c in reversed(coeffs):
        result = result * z + c
    return result


def _polyval_imag(coeffs: tuple[float, ...], theta: np.ndarray) -> np.ndarray:
    """Evaluate at ``z = i*theta`` via separate even/odd Horner passes.

    For real ``theta`` (the dispersive case) each pass stays in real
    arithmetic, avoiding the spurious imaginary round-off a complex Horner
    recursion accumulates on the axis.  The identity is algebraic, so
    complex ``theta`` (used by the stability map) is handled too.
    """
    theta = np.asarray(theta)
    if not np.iscomplexobj(theta):
        theta = theta.astype(float)
    t2 = theta * theta
    even = np.zeros_like(theta)
    for c in reversed(coeffs[0::2]):
        even = even * (-t2) + c
    odd = np.zeros_like(theta)
    for c in reversed(coeffs[1::2]):
        odd = odd * (-t2) + c
    return even + 1j * (theta * odd)


def r22(z):
    """(2,2) Pade approximant of ``exp(-z)``."""
    return _polyval(R22_NUM, z) / _polyval(R22_DEN, z)


def r22_tilde(z):
    """(2,2) Pade approximant of ``exp(-z/2)`` (equals ``r22(z/2)``)."""
    return _polyval(R22H_NUM, z) / _polyval(R22H_DEN, z)


def p1(z, k):
    """Full-step weight ``12k / (12 + 6z + z^2)``; limit ``k`` at ``z=0``."""
    return 12.0 * k / _polyval(R22_DEN, z)


def p2(z, k):
    """Full-step weight ``k(6 + z) / (12 + 6z + z^2)``; limit ``k/2`` at ``z=0``.

    Equals ``k * phi_2(-z)`` with ``exp(-z)`` replaced by :func:`r22`,
    where ``phi_2(w) = (e^w - 1 - w)/w^2``; this identity (rather than any
    other rational with the same ``z=0`` limit) is what keeps the scheme
    fourth order once dispersion is switched on.
    """
    return k * (6.0 + np.asarray(z, dtype=complex)) / _polyval(R22_DEN, z)


def p3(z, k):
    """Full-step weight ``2k(4 + z) / (12 + 6z + z^2)``; limit ``2k/3`` at ``z=0``.

    Equals ``4k * phi_3(-z)`` with ``exp(-z)`` replaced by :func:`r22`,
    where ``phi_3(w) = (e^w - 1 - w - w^2/2)/w^3``.
    """
    return 2.0 * k * (4.0 + np.asarray(z, dtype=complex)) / _polyval(R22_DEN, z)


def p1_tilde(z, k):
    """Half-step weight ``24k / (48 + 12z + z^2)``; limit ``k/2`` at ``z=0``."""
    return 24.0 * k / _polyval(R22H_DEN, z)


def p2_tilde(z, k):
    """Half-step weight ``2k(12 + z) / (48 + 12z + z^2)``; limit ``k/2`` at ``z=0``."""
    return 2.0 * k * (12.0 + np.asarray(z, dtype=complex)) / _polyval(R22H_DEN, z)


def r13(z):
    """(1,3) Pade approximant of ``exp(-z)``."""
    return _polyval(R13_NUM, z) / _polyval(R13_DEN, z)


def r13_tilde(z):
    """(1,3) Pade approximant of ``exp(-z/2)`` (equals ``r13(z/2)``)."""
    return _polyval(R13H_NUM, z) / _polyval(R13H_DEN, z)


@dataclass(frozen=True, eq=False)
class KrogstadTables:
    """Precomputed elementwise operators for one Krogstad step of size ``k``.

    Arrays have shape ``(rows, *grid_shape)`` where ``rows`` is 1 when all
    components share a dispersion coefficient and ``M`` otherwise; either
    way they broadcast against fields of shape ``(M, *grid_shape)``.
    """

    k: float
    r: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    r_half: np.ndarray
    p1_half: np.ndarray
    p2_half: np.ndarray


@dataclass(frozen=True, eq=False)
class IFRK4Tables:
    """Precomputed elementwise operators for one integrating-factor step."""

    k: float
    r: np.ndarray
    r_half: np.ndarray


def _ratio_imag(num: tuple[float, ...], den: tuple[float, ...], theta: np.ndarray) -> np.ndarray:
    return _polyval_imag(num, theta) / _polyval_imag(den, theta)


def krogstad_tables_imag(k: float, theta: np.ndarray) -> KrogstadTables:
    """Krogstad operators at ``z = i*theta`` (purely imaginary spectrum)."""
    theta = np.asarray(theta)
    if np.iscomplexobj(theta):
        # General spectrum: the conjugate shortcut below only holds on the axis.
        return krogstad_tables(k, 1j * theta)
    theta = theta.astype(float)
    den = _polyval_imag(R22_DEN, theta)
    den_h = _polyval_imag(R22H_DEN, theta)
    return KrogstadTables(
        k=float(k),
        r=np.conj(den) / den,
        p1=12.0 * k / den,
        p2=k * (6.0 + 1j * theta) / den,
        p3=2.0 * k * (4.0 + 1j * theta) / den,
        r_half=np.conj(den_h) / den_h,
        p1_half=24.0 * k / den_h,
        p2_half=2.0 * k * (12.0 + 1j * theta) / den_h,
    )


def ifrk4_tables_imag(k: float, theta: np.ndarray) -> IFRK4Tables:
    """Integrating-factor operators at ``z = i*theta``."""
    theta = np.asarray(theta)
    if np.iscomplexobj(theta):
        return ifrk4_tables(k, 1j * theta)
    theta = theta.astype(float)
    return IFRK4Tables(
        k=float(k),
        r=_ratio_imag(R13_NUM, R13_DEN, theta),
        r_half=_ratio_imag(R13H_NUM, R13H_DEN, theta),
    )


def krogstad_tables(k: float, z: np.ndarray) -> KrogstadTables:
    """Krogstad operators at general complex ``z = k * A_diag``."""
    z = np.asarray(z, dtype=complex)
    return KrogstadTables(
        k=float(k),
        r=r22(z),
        p1=p1(z, k),
        p2=p2(z, k),
        p3=p3(z, k),
        r_half=r22_tilde(z),
        p1_half=p1_tilde(z, k),
        p2_half=p2_tilde(z, k),
    )


def ifrk4_tables(k: float, z: np.ndarray) -> IFRK4Tables:
    """Integrating-factor operators at general complex ``z = k * A_diag``."""
    z = np.asarray(z, dtype=complex)
    return IFRK4Tables(k=float(k), r=r13(z), r_half=r13_tilde(z))


def dispersion_thetas(k: float, alpha: np.ndarray, symbol: np.ndarray) -> np.ndarray:
    """Per-component ``theta`` grids with ``z = i*theta = i*k*alpha_j*symbol``.

    Components sharing a dispersion coefficient share one row: the returned
    array has shape ``(1, *grid)`` when all ``alpha`` are equal and
    ``(M, *grid)`` otherwise, broadcasting against ``(M, *grid)`` fields.
    """
    alpha = np.asarray(alpha, dtype=float)
    if np.all(alpha == alpha[0]):
        rows = alpha[:1]
    else:
        rows = alpha
    return k * rows.reshape(rows.shape + (1,) * symbol.ndim) * symbol
