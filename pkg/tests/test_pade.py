"""Rational exponential approximants and stage-weight identities.

Oracles: hand-reduced rational values, mpmath high-precision exponentials,
and the phi-function identities the stage weights must satisfy.
"""
import mpmath
import numpy as np
import pytest

from cnls import pade

K = 0.3


def sample_z():
    return np.array(
        [0.7, -0.4, 1j * 2.0, -3j, 0.5 + 1.2j, -0.8 - 0.3j, 4.0 - 5.0j],
        dtype=complex,
    )


class TestRationalValues:
    def test_limits_at_zero(self):
        z = np.array([0.0])
        assert complex(pade.r22(z)[0]) == 1.0
        assert complex(pade.r13(z)[0]) == 1.0
        assert complex(pade.r22_tilde(z)[0]) == 1.0
        assert complex(pade.r13_tilde(z)[0]) == 1.0
        assert complex(pade.p1(z, K)[0]) == pytest.approx(K, rel=1e-15)
        assert complex(pade.p2(z, K)[0]) == pytest.approx(K / 2, rel=1e-15)
        assert complex(pade.p3(z, K)[0]) == pytest.approx(2 * K / 3, rel=1e-15)
        assert complex(pade.p1_tilde(z, K)[0]) == pytest.approx(K / 2, rel=1e-15)
        assert complex(pade.p2_tilde(z, K)[0]) == pytest.approx(K / 2, rel=1e-15)

    def test_hand_reduced_points(self):
        assert complex(pade.r22(1.0)) == pytest.approx(7 / 19, rel=1e-15)
        assert complex(pade.r13(1.0)) == pytest.approx(18 / 49, rel=1e-15)
        assert complex(pade.r22(1j)) == pytest.approx((11 - 6j) / (11 + 6j), rel=1e-15)

    def test_tilde_is_half_argument(self):
        z = sample_z()
        np.testing.assert_allclose(pade.r22_tilde(z), pade.r22(z / 2), rtol=1e-14)
        np.testing.assert_allclose(pade.r13_tilde(z), pade.r13(z / 2), rtol=1e-14)

    def test_unit_modulus_on_imaginary_axis(self):
        theta = np.linspace(-50.0, 50.0, 1001)
        assert np.max(np.abs(np.abs(pade.r22(1j * theta)) - 1.0)) <= 1e-14
        assert np.max(np.abs(np.abs(pade.r22_tilde(1j * theta)) - 1.0)) <= 1e-14

    def test_r13_contractive_on_imaginary_axis(self):
        theta = np.linspace(-50.0, 50.0, 1001)
        mod = np.abs(pade.r13(1j * theta))
        assert np.all(mod <= 1.0 + 1e-15)
        assert np.all(mod[np.abs(theta) > 0.5] < 1.0)

    def test_finite_on_imaginary_axis(self):
        theta = np.linspace(-1e4, 1e4, 2001)
        for fn in (pade.r22, pade.r13, pade.r22_tilde, pade.r13_tilde):
            assert np.all(np.isfinite(fn(1j * theta)))


class TestApproximationOrder:
    @staticmethod
    def _order(num, den):
        # |r(z) - exp(-z)| ~ C |z|^5 for a fourth-order approximant; the
        # log-log slope is measured at 50 digits to stay above roundoff.
        mpmath.mp.dps = 50
        direction = mpmath.mpc(1, 1) / mpmath.sqrt(2)
        ts = [mpmath.mpf(10) ** (-2 - i * mpmath.mpf("0.25")) for i in range(8)]
        errs = []
        for t in ts:
            z = t * direction
            r = mpmath.polyval(list(num[::-1]), z) / mpmath.polyval(list(den[::-1]), z)
            errs.append(abs(r - mpmath.exp(-z)))
        logt = np.array([float(mpmath.log10(t)) for t in ts])
        loge = np.array([float(mpmath.log10(e)) for e in errs])
        return np.polyfit(logt, loge, 1)[0]

    def test_r22_error_slope_close_to_five(self):
        assert self._order(pade.R22_NUM, pade.R22_DEN) >= 4.8

    def test_r13_error_slope_close_to_five(self):
        assert self._order(pade.R13_NUM, pade.R13_DEN) >= 4.8


class TestWeightIdentities:
    """Stage weights equal k*phi_j with the exponential replaced by r22.

    phi_1(w) = (e^w-1)/w, phi_2(w) = (e^w-1-w)/w^2,
    phi_3(w) = (e^w-1-w-w^2/2)/w^3, evaluated at w = -z (full step) or
    w = -z/2 (half step, with r22_tilde standing in for exp(-z/2)).
    """

    def test_p1_phi1_identity(self):
        z = sample_z()
        np.testing.assert_allclose(pade.p1(z, K), K * (1 - pade.r22(z)) / z, rtol=1e-13)

    def test_p2_phi2_identity(self):
        z = sample_z()
        np.testing.assert_allclose(
            pade.p2(z, K), K * (pade.r22(z) - 1 + z) / z**2, rtol=1e-13
        )

    def test_p3_phi3_identity(self):
        z = sample_z()
        np.testing.assert_allclose(
            pade.p3(z, K),
            4 * K * (pade.r22(z) - 1 + z - z**2 / 2) / (-(z**3)),
            rtol=1e-13,
        )

    def test_p1_tilde_phi1_identity(self):
        z = sample_z()
        np.testing.assert_allclose(
            pade.p1_tilde(z, K), K * (1 - pade.r22_tilde(z)) / z, rtol=1e-13
        )

    def test_p2_tilde_phi2_identity(self):
        z = sample_z()
        np.testing.assert_allclose(
            pade.p2_tilde(z, K),
            4 * K * (pade.r22_tilde(z) - 1 + z / 2) / z**2,
            rtol=1e-13,
        )


class TestTables:
    def test_imaginary_axis_tables_match_general_tables(self):
        theta = np.linspace(-7.0, 7.0, 23)
        fast = pade.krogstad_tables_imag(K, theta)
        slow = pade.krogstad_tables(K, 1j * theta)
        for name in ("r", "p1", "p2", "p3", "r_half", "p1_half", "p2_half"):
            np.testing.assert_allclose(
                getattr(fast, name), getattr(slow, name), rtol=1e-13, atol=1e-15
            )
        fast_if = pade.ifrk4_tables_imag(K, theta)
        slow_if = pade.ifrk4_tables(K, 1j * theta)
        np.testing.assert_allclose(fast_if.r, slow_if.r, rtol=1e-13)
        np.testing.assert_allclose(fast_if.r_half, slow_if.r_half, rtol=1e-13)

    def test_shared_dispersion_coefficient_collapses_rows(self):
        symbol = np.arange(12.0).reshape(3, 4)
        thetas = pade.dispersion_thetas(K, np.array([2.0, 2.0, 2.0]), symbol)
        assert thetas.shape == (1, 3, 4)
        np.testing.assert_allclose(thetas[0], K * 2.0 * symbol, rtol=1e-15)

    def test_distinct_dispersion_coefficients_keep_rows(self):
        symbol = np.arange(6.0).reshape(2, 3)
        alpha = np.array([1.0, -0.5, 3.0])
        thetas = pade.dispersion_thetas(K, alpha, symbol)
        assert thetas.shape == (3, 2, 3)
        for j, a in enumerate(alpha):
            np.testing.assert_allclose(thetas[j], K * a * symbol, rtol=1e-15)
