"""Hypothesis strategies for the exact algebra."""

from fractions import Fraction

from hypothesis import strategies as st

from kkw_boundary.clifford import MONOMIALS, CliffordElement
from kkw_boundary.rational import PoleRational
from kkw_boundary.scalars import GaussianRational, ScalarPoly

small = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
gaussians = st.builds(GaussianRational, small, small)


@st.composite
def scalar_polys(draw, max_terms=3):
    out = ScalarPoly()
    for _ in range(draw(st.integers(0, max_terms))):
        exps = {v: draw(st.integers(0, 2)) for v in ("kappa", "u", "f0", "f1")}
        mono = ScalarPoly.const(draw(gaussians))
        for v, e in exps.items():
            mono = mono * ScalarPoly.var(v, e) if e else mono
        out = out + mono
    return out


@st.composite
def clifford(draw, with_p=True, coeffs=None):
    monos = MONOMIALS if with_p else MONOMIALS[:4]
    coeffs = coeffs or gaussians
    chosen = draw(st.lists(st.sampled_from(monos), max_size=4, unique=True))
    return CliffordElement({m: draw(coeffs) for m in chosen})


@st.composite
def clifford_pair(draw):
    """Two elements whose product has P-degree at most 1."""
    x = draw(clifford(with_p=True))
    y = draw(clifford(with_p=False))
    return (x, y) if draw(st.booleans()) else (y, x)


@st.composite
def pole_rationals(draw, proper=True, max_order=4, with_p=False):
    a = draw(st.integers(0, max_order))
    b = draw(st.integers(0, max_order))
    top = a + b - 1 if proper else a + b + 2
    if top < 0:
        return PoleRational()
    deg = draw(st.integers(0, top))
    num = tuple(draw(clifford(with_p=with_p)) for _ in range(deg + 1))
    return PoleRational(num, a, b)


def frac(a, b=1):
    return GaussianRational(Fraction(a, b))
