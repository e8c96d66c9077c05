import math

import pytest

from rtflab.errors import QuadratureError
from rtflab.quadrature import (
    QuadratureResult,
    integrate,
    integrate_with_cos_substitution,
)


class TestIntegrate:
    def test_constant(self):
        res = integrate(lambda x: 1.0, 0.0, 1.0, 1e-12)
        assert res.value == pytest.approx(1.0, abs=1e-15)
        assert res.error_estimate <= 1e-12

    def test_polynomial_exact(self):
        res = integrate(lambda x: x**5 - 3 * x**2, -1.0, 2.0, 1e-12)
        exact = (2**6 - 1) / 6 - (2**3 + 1)
        assert res.value == pytest.approx(exact, abs=1e-13)

    def test_oscillatory(self):
        res = integrate(lambda x: math.sin(40.0 * x), 0.0, math.pi, 1e-11)
        exact = (1.0 - math.cos(40.0 * math.pi)) / 40.0
        assert res.value == pytest.approx(exact, abs=1e-10)

    def test_orientation(self):
        fwd = integrate(lambda x: x, 0.0, 1.0, 1e-12).value
        rev = integrate(lambda x: x, 1.0, 0.0, 1e-12).value
        assert fwd == pytest.approx(-rev, abs=1e-15)

    def test_empty_interval(self):
        assert integrate(lambda x: 1.0, 2.0, 2.0, 1e-12) == QuadratureResult(0.0, 0.0, 0)

    def test_invalid_tolerance(self):
        with pytest.raises(ValueError):
            integrate(lambda x: 1.0, 0.0, 1.0, 0.0)

    def test_nonconvergence_reports_achieved_estimate(self):
        # A kink integrand at an irrational point defeats the panel budget at
        # an impossible tolerance; the partial result must be attached.
        c = 1.0 / math.sqrt(2.0)
        exact = (2.0 / 3.0) * (c**1.5 + (1.0 - c) ** 1.5)
        f = lambda x: abs(x - c) ** 0.5
        with pytest.raises(QuadratureError) as info:
            integrate(f, 0.0, 1.0, 1e-16, max_subdivisions=64)
        partial = info.value.result
        assert partial is not None
        assert partial.error_estimate > 1e-16
        assert partial.value == pytest.approx(exact, abs=1e-6)

    def test_error_estimate_is_conservative_on_kink(self):
        c = 1.0 / math.sqrt(2.0)
        exact = (2.0 / 3.0) * (c**1.5 + (1.0 - c) ** 1.5)
        res = integrate(lambda x: abs(x - c) ** 0.5, 0.0, 1.0, 1e-10)
        assert abs(res.value - exact) <= res.error_estimate


class TestCosSubstitution:
    def test_semicircle_quarter(self):
        # closed form: integral of sqrt(4 - x^2) over [0, 2] is pi
        res = integrate_with_cos_substitution(
            lambda x: math.sqrt(max(4.0 - x * x, 0.0)), 0.0, 2.0, 1e-12
        )
        assert res.value == pytest.approx(math.pi, abs=1e-12)

    def test_full_semicircle_mass(self):
        res = integrate_with_cos_substitution(
            lambda x: math.sqrt(max(4.0 - x * x, 0.0)) / (2.0 * math.pi), -2.0, 2.0, 1e-12
        )
        assert res.value == pytest.approx(1.0, abs=1e-12)

    def test_rejects_outside_square_bracket(self):
        with pytest.raises(ValueError):
            integrate_with_cos_substitution(lambda x: 1.0, -3.0, 1.0)

    def test_substitution_beats_naive_rule_at_endpoint(self):
        # The raw adaptive rule needs far more panels for the sqrt endpoint.
        f = lambda x: math.sqrt(max(4.0 - x * x, 0.0))
        sub = integrate_with_cos_substitution(f, -2.0, 2.0, 1e-12)
        naive = integrate(f, -2.0, 2.0, 1e-9)
        assert sub.subdivisions < naive.subdivisions
        assert sub.value == pytest.approx(2.0 * math.pi, abs=1e-12)
