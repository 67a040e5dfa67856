"""Published reference values and intermediate integrands, transcribed verbatim.

These are comparison targets only; nothing in the engine reads them while
computing.  Case values carry one factor of pi and Omega_{n-2}.
"""

from __future__ import annotations

from fractions import Fraction

from .clifford import CliffordElement
from .rational import PoleRational
from .scalars import F0, F1, KAPPA, GaussianRational, I, Marked, ScalarPoly


def _g(re, im=0) -> GaussianRational:
    return GaussianRational(Fraction(re), Fraction(im))


def _scalar_rational(coeffs, a, b, factor=1) -> PoleRational:
    factor = ScalarPoly.coerce(factor)
    return PoleRational(tuple(CliffordElement.scalar(factor * ScalarPoly.const(c)) for c in coeffs), a, b)


def _m(coeff, omega) -> Marked:
    return Marked(coeff, 1, {omega: 1})


# (n, p1, p2, perturbation) -> {label: value}
CASE_VALUES = {
    (6, 1, 3, "none"): {
        "aI": _m(0, 4),
        "aII": _m(KAPPA * _g(Fraction(-15, 16)), 4),
        "aIII": _m(KAPPA * _g(Fraction(25, 16)), 4),
        "b": _m(KAPPA * _g(Fraction(-25, 8), Fraction(-35, 16)), 4),
        "c": _m(KAPPA * _g(Fraction(55, 16)), 4),
    },
    (5, 1, 3, "none"): {
        "main": _m(ScalarPoly.const(_g(0, Fraction(3, 4))), 3),
    },
    (6, 2, 2, "left-multiply-f"): {
        "aI": _m(0, 4),
        "aII": _m(F0 * KAPPA * _g(Fraction(-5, 8)) + F1 * _g(0, 3), 4),
        "aIII": _m(F0 * KAPPA * _g(Fraction(5, 8)), 4),
    },
}

TOTALS = {
    (6, 1, 3, "none"): _m(KAPPA * _g(Fraction(15, 16), Fraction(-35, 16)), 4),
    (5, 1, 3, "none"): _m(ScalarPoly.const(_g(0, Fraction(3, 4))), 3),
    (6, 2, 2, "left-multiply-f"): _m(F1 * _g(0, 3), 4),
}

# groups of cases whose sum is stated without the individual values
GROUP_SUMS = {
    (6, 2, 2, "left-multiply-f"): {("b", "c"): _m(0, 4)},
}

# the f1 part of case aII for the perturbed (2,2) computation, as displayed
F1_PART_AII = _m(F1 * _g(0, 3), 4)
F0_PART_AII = _m(F0 * KAPPA * _g(Fraction(-5, 8)), 4)

# bracket traces (without the case coefficient)
TRACES = {
    (6, 1, 3, "none", "aII"): _scalar_rational([-8, _g(0, -24), 40, _g(0, 24)], 6, 4, KAPPA),
    (6, 1, 3, "none", "aIII"): _scalar_rational([_g(0, 8), -32, _g(0, -8)], 5, 4, KAPPA),
    (6, 1, 3, "none", "b"): _scalar_rational([_g(7, 6), _g(-20, 15), _g(7, -6), _g(0, 15)], 5, 4, KAPPA),
    (6, 1, 3, "none", "c"): _scalar_rational([_g(0, -7), 26, _g(0, 15)], 5, 3, KAPPA),
    (5, 1, 3, "none", "main"): _scalar_rational([_g(0, 2), -6], 3, 3),
}

# integrands after the case coefficient, as displayed
INTEGRANDS = {
    (6, 1, 3, "none", "aII"): _scalar_rational([4, _g(0, 12), -20, _g(0, -12)], 6, 4, KAPPA),
    (6, 1, 3, "none", "aIII"): _scalar_rational([_g(0, -4), 16, _g(0, 4)], 5, 4, KAPPA),
}

# the two halves of the case c trace: tr[B2 x d_xi sigma_-3] and tr[B1 x d_xi sigma_-3]
TRACE_C_B2 = _scalar_rational([_g(0, 4), -11, _g(0, -6), 3], 5, 3, KAPPA)
TRACE_C_B1 = _scalar_rational([3, _g(0, 12), 3], 4, 3, KAPPA)

# tr[pi^+ sigma_-2(D^-2) x d_xi^2 sigma_-2(D^-2)] for n = 6
TRACE_F1_AII = _scalar_rational([_g(0, 8), 0, _g(0, -24)], 4, 3)

# d_xi^2 |xi|^-2
DXI2_SIGMA_M2 = _scalar_rational([-2, 0, 6], 3, 3)
# pi^+ |xi|^-2
PI_PLUS_SIGMA_M2 = _scalar_rational([_g(0, Fraction(-1, 2))], 1, 0)

# geometry
K_COEFF = {6: _g(Fraction(-5, 2)), 5: _g(-2)}  # K(x0) = K_COEFF * kappa
BOUNDARY_COEFF_6 = _g(Fraction(-3, 8), Fraction(7, 8))  # of pi*Omega4*int K
BOUNDARY_CONSTANT_6 = Marked(ScalarPoly.const(GaussianRational(16) / _g(-3, 7)), -1, {4: -1})
INTERIOR_CONSTANT_6 = Marked(ScalarPoly.const(_g(Fraction(-3, 80))), -1, {5: -1})
INTERIOR_WRES_6 = Marked(ScalarPoly.const(_g(Fraction(-5, 3))), 0, {5: 1})  # times int s
ACTION_CONSTANT_5 = Marked(KAPPA * (GaussianRational(16) * I / 3), -1, {3: -1})
I_GR_B = {6: KAPPA * _g(-5), 5: KAPPA * _g(-4)}  # times Vol(boundary)
