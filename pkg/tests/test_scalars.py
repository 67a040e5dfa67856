import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kkw_boundary.scalars import F0, F1, KAPPA, U, GaussianRational, I, Marked, ScalarPoly
from strategies import gaussians, scalar_polys


class TestGaussianRational:
    def test_i_squared(self):
        assert I * I == GaussianRational(-1)

    def test_division(self):
        z = GaussianRational(Fraction(3, 2), -2)
        assert z / z == GaussianRational(1)
        assert GaussianRational(1) / I == -I

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            GaussianRational(1) / GaussianRational(0)

    @given(gaussians, gaussians, gaussians)
    def test_field_axioms(self, x, y, z):
        assert x + y == y + x
        assert x * y == y * x
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        if not x.is_zero():
            assert x * (GaussianRational(1) / x) == GaussianRational(1)

    @given(gaussians)
    def test_json_roundtrip(self, x):
        assert GaussianRational.from_json(json.loads(json.dumps(x.to_json()))) == x


class TestScalarPoly:
    @given(scalar_polys(), scalar_polys(), scalar_polys())
    def test_ring_axioms(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == ScalarPoly()
        assert p * ScalarPoly.const(1) == p

    @given(scalar_polys(), scalar_polys())
    def test_evaluation_is_a_homomorphism(self, p, q):
        at = {"kappa": 0.3, "u": 1.2, "f0": 0.7, "f1": -1.1}
        assert abs((p * q).evaluate(at) - p.evaluate(at) * q.evaluate(at)) < 1e-9
        assert abs((p + q).evaluate(at) - p.evaluate(at) - q.evaluate(at)) < 1e-9

    @given(scalar_polys())
    def test_json_roundtrip_is_deterministic(self, p):
        text = json.dumps(p.to_json())
        back = ScalarPoly.from_json(json.loads(text))
        assert back == p
        assert json.dumps(back.to_json()) == text

    def test_subs(self):
        p = KAPPA * U + F0
        assert p.subs({"u": 1}) == KAPPA + F0

    def test_render(self):
        assert str(KAPPA * GaussianRational(Fraction(-15, 16))) == "-(15/16)*kappa"
        assert str(F1 * I * 3) == "3*i*f1"

    def test_divide_exact(self):
        assert (KAPPA * KAPPA * 3).divide_exact(KAPPA) == KAPPA * 3


class TestMarked:
    def test_add_requires_equal_markers(self):
        a = Marked(KAPPA, 1, {4: 1})
        with pytest.raises(ValueError):
            a + Marked(KAPPA, 1, {3: 1})

    def test_zero_passes_through(self):
        a = Marked(KAPPA, 1, {4: 1})
        assert a + Marked(0, 0, {}) == a

    def test_inverse(self):
        a = Marked(ScalarPoly.const(GaussianRational(-3, 7)), 1, {4: 1})
        assert a * a.inverse() == Marked(1, 0, {})

    def test_render_negative_powers(self):
        m = Marked(ScalarPoly.const(GaussianRational(Fraction(-3, 80))), -1, {5: -1})
        assert str(m) == "-(3/80)/(pi*Omega5)"

    @given(scalar_polys(), st.integers(-2, 2), st.integers(3, 5))
    def test_json_roundtrip(self, c, p, k):
        m = Marked(c, p, {k: 1})
        assert Marked.from_json(json.loads(json.dumps(m.to_json()))) == m
