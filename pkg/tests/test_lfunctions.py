import math

import mpmath
import pytest

from rtflab.characters import DirichletCharacter, l_one
from rtflab.errors import PoleError, StencilDisagreementError
from rtflab.lfunctions import (
    central_series_function,
    completed_l,
    completed_zeta,
    edge_coefficients,
    epsilon_of_minus_z,
    extract_series,
    l_fin,
    laurent_at_1,
    laurent_at_1_two_widths,
    pole_order_scan,
    zeta_fin,
)
from rtflab.special import EULER_GAMMA

CHI5 = DirichletCharacter.quadratic(5)
CHI8 = DirichletCharacter.quadratic(8)


class TestEvaluators:
    def test_zeta_classical_values(self):
        assert zeta_fin(2.0) == pytest.approx(math.pi**2 / 6.0, abs=1e-12)
        assert zeta_fin(-1.0) == pytest.approx(-1.0 / 12.0, abs=1e-12)

    def test_zeta_pole(self):
        with pytest.raises(PoleError):
            zeta_fin(1.0)

    def test_l_fin_at_one_matches_digamma_formula(self):
        for chi in (CHI5, CHI8):
            assert l_fin(1.0, chi).real == pytest.approx(float(l_one(chi)), abs=1e-12)

    def test_l_fin_euler_factor_removal(self):
        # trivial character mod 6 = zeta with factors at 2 and 3 removed
        chi = DirichletCharacter.trivial(6)
        s = 2.3
        expected = zeta_fin(s) * (1 - 2.0**-s) * (1 - 3.0**-s)
        assert l_fin(s, chi) == pytest.approx(expected, abs=1e-12)

    def test_completed_zeta_functional_equation(self):
        for s in (0.3, 0.7 + 0.4j, -1.2):
            assert completed_zeta(s) == pytest.approx(completed_zeta(1.0 - complex(s)), abs=1e-12)

    def test_completed_l_functional_equation(self):
        # even primitive quadratic: epsilon = +1, so Lambda(s) = Lambda(1-s)
        for chi in (CHI5, CHI8):
            for s in (0.25, 0.6, 1.7):
                a = completed_l(s, chi)
                b = completed_l(1.0 - s, chi)
                assert a == pytest.approx(b, abs=1e-12 * max(1.0, abs(a)))

    def test_completed_l_trivial_zero_is_finite(self):
        # s = 0 through the functional equation: equals Lambda(1)
        v0 = completed_l(0.0, CHI5)
        v1 = completed_l(1.0, CHI5)
        assert v0 == pytest.approx(v1, abs=1e-12)
        assert v1.real == pytest.approx(math.sqrt(5.0 / math.pi) * math.gamma(0.5) * float(l_one(CHI5)), rel=1e-12)


class TestEpsilonFactor:
    def test_trivial(self):
        assert epsilon_of_minus_z(0.37, None) == 1.0 + 0.0j

    def test_even_quadratic_at_zero(self):
        # tau(chi5)/sqrt(5) * 5^{1/2} = tau(chi5) = sqrt(5)
        assert epsilon_of_minus_z(0.0, CHI5) == pytest.approx(math.sqrt(5.0), abs=1e-12)

    def test_consistency_with_functional_equation(self):
        # The epsilon with the conductor power m**(1/2+z) belongs to the
        # completion WITHOUT the conductor power: for
        # Lambda0(s) = pi**(-s/2) Gamma(s/2) L_fin(s) = completed_l(s) / m**(s/2)
        # one has Lambda0(-z) = eps(-z) Lambda0(1+z).
        m = CHI5.modulus
        for z in (0.2, 0.5, 1.1):
            lhs = completed_l(-z, CHI5) / m ** (-z / 2.0)
            rhs = epsilon_of_minus_z(z, CHI5) * completed_l(1.0 + z, CHI5) / m ** ((1.0 + z) / 2.0)
            assert lhs == pytest.approx(rhs, rel=1e-11)


class TestLaurent:
    def test_completed_zeta_residue_is_one(self):
        data = laurent_at_1(None)
        assert data.residue == pytest.approx(1.0, abs=1e-10)

    def test_c0_closed_form(self):
        # classical: constant term of the completed zeta at 1 is (gamma - log(4 pi))/2
        data = laurent_at_1(None)
        assert data.c0 == pytest.approx((EULER_GAMMA - math.log(4.0 * math.pi)) / 2.0, abs=1e-11)

    def test_two_widths_agree(self):
        for xi in (None, CHI5, CHI8):
            a, b = laurent_at_1_two_widths(xi)
            assert abs(a.residue - b.residue) <= 1e-7
            assert abs(a.c0 - b.c0) <= 1e-7
            assert abs(a.c1 - b.c1) <= 1e-7

    def test_nontrivial_residue_zero_and_c0_value(self):
        data = laurent_at_1(CHI5)
        assert data.residue == 0.0
        assert data.c0 == pytest.approx(completed_l(1.0, CHI5).real, abs=1e-10)

    def test_c1_matches_independent_derivative(self):
        # c1 = d/ds completed_l at s=1: Richardson-extrapolated central
        # differences of the raw mpmath formula at 50 digits.
        data = laurent_at_1(CHI5)
        with mpmath.workdps(50):
            def f(s):
                return (mpmath.mpf(5) / mpmath.pi) ** (s / 2) * mpmath.gamma(s / 2) * (
                    mpmath.mpf(5) ** -s
                    * mpmath.fsum(
                        {1: 1, 2: -1, 3: -1, 4: 1}[a] * mpmath.zeta(s, mpmath.mpf(a) / 5)
                        for a in (1, 2, 3, 4)
                    )
                )
            diffs = []
            for h in (mpmath.mpf("1e-3"), mpmath.mpf("5e-4"), mpmath.mpf("2.5e-4")):
                diffs.append((f(1 + h) - f(1 - h)) / (2 * h))
            r1 = [(4 * diffs[i + 1] - diffs[i]) / 3 for i in range(2)]
            ref = float(mpmath.re((16 * r1[1] - r1[0]) / 15))
        assert data.c1 == pytest.approx(ref, abs=1e-10)

    def test_disagreement_raises(self):
        # A function with a branch point at the expansion center defeats the
        # polynomial stencil model, so the two widths cannot agree.
        bad = lambda s: abs(s - 1.0) ** 0.5
        with pytest.raises(StencilDisagreementError):
            laurent_at_1_wrapped(bad)


def laurent_at_1_wrapped(f):
    from rtflab.lfunctions import LaurentData

    out = []
    for w in (1e-2, 5e-3):
        a = extract_series(f, 1.0, 1, w)
        out.append(LaurentData(a[0], a[1], a[2]))
    first, second = out
    for x, y, name in (
        (first.residue, second.residue, "residue"),
        (first.c0, second.c0, "c0"),
        (first.c1, second.c1, "c1"),
    ):
        if abs(x - y) > 1e-7:
            raise StencilDisagreementError(name)
    return second


class TestEdgeCoefficients:
    def test_pole_orders(self):
        assert pole_order_scan(central_series_function(None), -1.0) == 2
        assert pole_order_scan(central_series_function(CHI5), -1.0) == 0

    def test_trivial_leading_coefficient_closed_form(self):
        # c_minus2 = 4 / completed_zeta(2) = 24 / pi (residues of both factors are -2)
        coeffs = edge_coefficients(None)
        assert coeffs.c_minus2 == pytest.approx(24.0 / math.pi, abs=1e-10)

    def test_quadratic_is_regular(self):
        coeffs = edge_coefficients(CHI5)
        assert abs(coeffs.c_minus2) <= 1e-12
        assert abs(coeffs.c_minus1) <= 1e-12
        direct = complex(central_series_function(CHI5)(-1.0)).real
        assert coeffs.c_zero == pytest.approx(direct, abs=1e-10)

    def test_reconstruction_near_pole(self):
        coeffs = edge_coefficients(None)
        f = central_series_function(None)
        h = 0.01
        recon = coeffs.c_minus2 / h**2 + coeffs.c_minus1 / h + coeffs.c_zero
        direct = complex(f(-1.0 + h)).real
        assert abs(direct - recon) / abs(direct) <= 1e-4

    def test_discriminant_prefactor(self):
        # D**（nu/2) at nu=-1 scales the double-pole coefficient by D**(-1/2)
        base = edge_coefficients(None, 1)
        scaled = edge_coefficients(None, 4)
        assert scaled.c_minus2 == pytest.approx(base.c_minus2 / 2.0, rel=1e-9)


class TestExtractSeries:
    def test_polynomial_exact(self):
        f = lambda s: 3.0 + 2.0 * (s - 1.0) + 0.5 * (s - 1.0) ** 2 - (s - 1.0) ** 3
        a = extract_series(f, 1.0, 0, 1e-2)
        assert a[0] == pytest.approx(3.0, abs=1e-12)
        assert a[1] == pytest.approx(2.0, abs=1e-10)
        assert a[2] == pytest.approx(0.5, abs=1e-8)
        assert a[3] == pytest.approx(-1.0, abs=1e-6)

    def test_simple_pole(self):
        f = lambda s: 7.0 / (s - 2.0) + 1.5
        a = extract_series(f, 2.0, 1, 1e-2)
        assert a[0] == pytest.approx(7.0, abs=1e-12)
        assert a[1] == pytest.approx(1.5, abs=1e-11)


class TestEdgeClosedForms:
    def test_trivial_coefficients_against_derivative_closed_forms(self):
        # Squaring the zeta Laurent data at the edge and dividing by the
        # completed zeta at 2 gives closed forms for all three coefficients:
        #   c_-2 = 4/z,  c_-1 = 4 (z'/z - C0)/z,
        #   c_0  = (2 C1 + C0^2 - 4 C0 z'/z + 4 ((z'/z)^2 - z''/(2 z))) / z
        # with z = zeta_hat(2) and C0, C1 the Laurent data at 1.
        with mpmath.workdps(40):
            zc = lambda s: mpmath.pi ** (-s / 2) * mpmath.gamma(s / 2) * mpmath.zeta(s)
            z2 = float(zc(2))
            r = float(mpmath.diff(zc, 2) / zc(2))
            h = float(mpmath.diff(zc, 2, 2) / (2 * zc(2)))
        data = laurent_at_1(None)
        coeffs = edge_coefficients(None)
        assert coeffs.c_minus2 == pytest.approx(4.0 / z2, abs=1e-10)
        assert coeffs.c_minus1 == pytest.approx(4.0 * (r - data.c0) / z2, abs=1e-10)
        closed = (2.0 * data.c1 + data.c0**2 - 4.0 * data.c0 * r + 4.0 * (r * r - h)) / z2
        assert coeffs.c_zero == pytest.approx(closed, abs=1e-9)
