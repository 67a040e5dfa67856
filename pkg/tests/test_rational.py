import json

import pytest
from hypothesis import given, settings

from kkw_boundary.clifford import A, B, CliffordElement
from kkw_boundary.rational import (
    ImproperRational,
    NotIntegrable,
    PoleRational,
    integrate_line,
    pi_minus,
    pi_plus,
    rat_diff_xi,
    rat_partial_fractions,
)
from kkw_boundary.scalars import GaussianRational, I, Marked
from strategies import frac, pole_rationals

XI = PoleRational.xi()


def _num(x: PoleRational, z: complex) -> complex:
    """Evaluate a scalar PoleRational at a complex point."""
    total = sum(complex(c.coeff("1").constant_value()) * z**k for k, c in enumerate(x.numerator))
    return total / ((z - 1j) ** x.a * (z + 1j) ** x.b)


def test_reduction_cancels_poles():
    x = PoleRational((CliffordElement.scalar(-I), CliffordElement.scalar(1)), 2, 1)  # (xi - i)/((xi-i)^2 (xi+i))
    assert (x.a, x.b) == (1, 1)


def test_norm_power_is_one_plus_xi_squared():
    assert PoleRational.norm_power(-1) == XI * XI + PoleRational.const(1)
    assert PoleRational.norm_power(1) * PoleRational.norm_power(-1) == PoleRational.const(1)


def test_render():
    x = PoleRational.norm_power(1)
    assert str(pi_plus(x)) == "-i/(2*(xi-i))"
    assert str(PoleRational.norm_power(2, (frac(3),))) == "3/((xi-i)^2*(xi+i)^2)"


def test_known_projection():
    # pi^+ of 1/(1+xi^2)^2
    x = PoleRational.norm_power(2)
    expected = PoleRational((CliffordElement.scalar(frac(-1, 4)),), 2) + PoleRational(
        (CliffordElement.scalar(GaussianRational(0, frac(-1, 4).re)),), 1
    )
    assert pi_plus(x) == expected


def test_projection_of_improper_raises():
    with pytest.raises(ImproperRational):
        pi_plus(XI)


def test_integrals():
    assert integrate_line(PoleRational.norm_power(1)).scalar() == GaussianRational(1)  # times pi
    assert integrate_line(PoleRational.norm_power(2)).scalar() == frac(1, 2)
    with pytest.raises(NotIntegrable):
        integrate_line(XI * PoleRational.norm_power(1))


def test_clifford_valued_integral_keeps_clifford_part():
    x = PoleRational((A + B,), 1, 1)
    assert integrate_line(x).coefficient == A + B


@settings(max_examples=500)
@given(pole_rationals(with_p=True))
def test_projector_algebra(x):
    p, m = pi_plus(x), pi_minus(x)
    assert p + m == x
    assert pi_plus(p) == p
    assert pi_minus(m) == m
    assert pi_plus(m).is_zero() and pi_minus(p).is_zero()
    assert p.b == 0 and m.a == 0


@given(pole_rationals(proper=False))
def test_partial_fraction_recombination(x):
    assert rat_partial_fractions(x).recombine() == x


@given(pole_rationals())
def test_derivative_commutes_with_projection(x):
    assert rat_diff_xi(pi_plus(x)) == pi_plus(rat_diff_xi(x))
    assert rat_diff_xi(pi_minus(x)) == pi_minus(rat_diff_xi(x))


@given(pole_rationals(), pole_rationals())
def test_field_operations(x, y):
    assert x * y == y * x or not (x.is_scalar() and y.is_scalar())
    assert (x + y) - y == x
    assert rat_diff_xi(x * y) == rat_diff_xi(x) * y + x * rat_diff_xi(y)


@given(pole_rationals(max_order=3))
def test_integral_matches_residue_numerics(x):
    x = PoleRational(tuple(CliffordElement.scalar(c.coeff("1")) for c in x.numerator), x.a, x.b)
    if x.is_zero() or x.degree > x.a + x.b - 2:
        return
    from scipy.integrate import quad

    re = quad(lambda t: _num(x, t).real, -float("inf"), float("inf"), epsabs=1e-11)[0]
    im = quad(lambda t: _num(x, t).imag, -float("inf"), float("inf"), epsabs=1e-11)[0]
    exact = complex(integrate_line(x).scalar().constant_value()) * 3.141592653589793
    assert abs(complex(re, im) - exact) < 1e-7 * max(1.0, abs(exact))


def test_marked_integral_json():
    m = Marked(integrate_line(PoleRational.norm_power(2)).scalar(), 1, {4: 1})
    assert json.loads(json.dumps(m.to_json()))["text"] == "(1/2)*pi*Omega4"
