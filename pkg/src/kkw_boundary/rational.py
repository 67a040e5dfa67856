"""Rational functions of xi_n whose only poles sit at +i and -i.

Numerators are polynomials in xi_n with CliffordElement coefficients; the
denominator is always (xi - i)^a (xi + i)^b.  With |xi'| = 1 this covers
every |xi|^2 = 1 + xi_n^2 power that occurs at the boundary point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Sequence

from .clifford import CliffordElement, cl_trace
from .scalars import GaussianRational, I, ScalarPoly, join_signed, monomial_factors, render_term

Poly = tuple  # tuple[CliffordElement, ...], index = power of xi

_ZERO = CliffordElement()
_PLUS_I = I
_MINUS_I = -I


class NotIntegrable(ValueError):
    """Numerator degree too high for absolute integrability over the real line."""


class ImproperRational(ValueError):
    """pi^+/pi^- requested on a rational with a polynomial part."""


# -- polynomial helpers (coefficients may be noncommuting; xi is central) --

def _strip(coeffs) -> Poly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return tuple(coeffs)


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _strip(
        (p[k] if k < len(p) else _ZERO) + (q[k] if k < len(q) else _ZERO) for k in range(n)
    )


def poly_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [_ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return _strip(out)


def poly_scale(p: Poly, c) -> Poly:
    return _strip(x.scale(c) for x in p)


def scalar_poly_mul(p: Poly, s: Sequence[GaussianRational]) -> Poly:
    """Multiply by a polynomial with Gaussian-rational coefficients."""
    if not p or not s:
        return ()
    out = [_ZERO] * (len(p) + len(s) - 1)
    for i, a in enumerate(p):
        for j, c in enumerate(s):
            if not c.is_zero():
                out[i + j] = out[i + j] + a.scale(c)
    return _strip(out)


def linear_power(root: GaussianRational, k: int) -> list[GaussianRational]:
    """Coefficients of (xi - root)^k."""
    return [comb(k, j) * (-root) ** (k - j) for j in range(k + 1)]


def poly_eval(p: Poly, point: GaussianRational) -> CliffordElement:
    acc = _ZERO
    for c in reversed(p):
        acc = acc.scale(point) + c
    return acc


def poly_div_linear(p: Poly, root: GaussianRational) -> tuple[Poly, CliffordElement]:
    """Synthetic division by (xi - root): returns (quotient, remainder)."""
    if not p:
        return (), _ZERO
    q = [_ZERO] * (len(p) - 1)
    carry = p[-1]
    for k in range(len(p) - 2, -1, -1):
        q[k] = carry
        carry = p[k] + carry.scale(root)
    return _strip(q), carry


def poly_deriv(p: Poly) -> Poly:
    return _strip(p[k].scale(k) for k in range(1, len(p)))


def poly_map(p: Poly, fn) -> Poly:
    return _strip(fn(c) for c in p)


class PoleRational:
    """numerator(xi) / ((xi - i)^a (xi + i)^b), kept in reduced form."""

    __slots__ = ("numerator", "a", "b")

    def __init__(self, numerator=(), a: int = 0, b: int = 0):
        if a < 0 or b < 0:
            raise ValueError("pole orders must be nonnegative")
        num = _strip(CliffordElement.coerce(c) for c in numerator)
        # cancel common pole factors
        while a > 0 and num and poly_eval(num, _PLUS_I).is_zero():
            num, _ = poly_div_linear(num, _PLUS_I)
            a -= 1
        while b > 0 and num and poly_eval(num, _MINUS_I).is_zero():
            num, _ = poly_div_linear(num, _MINUS_I)
            b -= 1
        if not num:
            a = b = 0
        self.numerator = num
        self.a = a
        self.b = b

    # -- constructors --
    @classmethod
    def const(cls, c) -> "PoleRational":
        return cls((CliffordElement.coerce(c),))

    @classmethod
    def xi(cls) -> "PoleRational":
        return cls((_ZERO, CliffordElement.scalar(1)))

    @classmethod
    def poly(cls, coeffs) -> "PoleRational":
        return cls(tuple(CliffordElement.coerce(c) for c in coeffs))

    @classmethod
    def norm_power(cls, k: int, numerator=(1,)) -> "PoleRational":
        """numerator / (1 + xi^2)^k  (k may be negative for positive powers)."""
        num = tuple(CliffordElement.coerce(c) for c in numerator)
        if k >= 0:
            return cls(num, k, k)
        one_plus = [GaussianRational(1), GaussianRational(0), GaussianRational(1)]
        for _ in range(-k):
            num = scalar_poly_mul(num, one_plus)
        return cls(num)

    @classmethod
    def coerce(cls, value) -> "PoleRational":
        if isinstance(value, PoleRational):
            return value
        return cls.const(value)

    # -- structure --
    @property
    def degree(self) -> int:
        return len(self.numerator) - 1

    def is_zero(self) -> bool:
        return not self.numerator

    def is_scalar(self) -> bool:
        return all(c.is_scalar() for c in self.numerator)

    def is_proper(self) -> bool:
        return self.is_zero() or self.degree < self.a + self.b

    def scalar_numerator(self) -> list[ScalarPoly]:
        if not self.is_scalar():
            raise ValueError("rational has non-scalar Clifford coefficients")
        return [c.coeff("1") for c in self.numerator]

    def _lifted(self, a: int, b: int) -> Poly:
        num = self.numerator
        if a > self.a:
            num = scalar_poly_mul(num, linear_power(_PLUS_I, a - self.a))
        if b > self.b:
            num = scalar_poly_mul(num, linear_power(_MINUS_I, b - self.b))
        return num

    # -- arithmetic --
    def __add__(self, other):
        other = PoleRational.coerce(other)
        a, b = max(self.a, other.a), max(self.b, other.b)
        return PoleRational(poly_add(self._lifted(a, b), other._lifted(a, b)), a, b)

    __radd__ = __add__

    def __neg__(self):
        return PoleRational(tuple(-c for c in self.numerator), self.a, self.b)

    def __sub__(self, other):
        return self + (-PoleRational.coerce(other))

    def __rsub__(self, other):
        return PoleRational.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, PoleRational):
            return PoleRational(poly_mul(self.numerator, other.numerator), self.a + other.a, self.b + other.b)
        if isinstance(other, CliffordElement):
            return PoleRational(tuple(c * other for c in self.numerator), self.a, self.b)
        if isinstance(other, (int, Fraction, GaussianRational, ScalarPoly)):
            return PoleRational(poly_scale(self.numerator, other), self.a, self.b)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, CliffordElement):
            return PoleRational(tuple(other * c for c in self.numerator), self.a, self.b)
        if isinstance(other, (int, Fraction, GaussianRational, ScalarPoly)):
            return PoleRational(poly_scale(self.numerator, other), self.a, self.b)
        return NotImplemented

    def __pow__(self, k: int):
        out = PoleRational.const(1)
        for _ in range(k):
            out = out * self
        return out

    def divide_pole(self, a: int, b: int) -> "PoleRational":
        """Divide by (xi - i)^a (xi + i)^b."""
        return PoleRational(self.numerator, self.a + a, self.b + b)

    def map_coeffs(self, fn) -> "PoleRational":
        """Apply a map to every Clifford coefficient of the numerator."""
        return PoleRational(poly_map(self.numerator, fn), self.a, self.b)

    def subs(self, assignments) -> "PoleRational":
        return self.map_coeffs(lambda c: c.subs(assignments))

    def trace(self, n: int) -> "PoleRational":
        return self.map_coeffs(lambda c: CliffordElement.scalar(cl_trace(c, n)))

    def evaluate_at(self, point: GaussianRational) -> CliffordElement:
        """Exact value at a point that is not a pole."""
        if (self.a and point == _PLUS_I) or (self.b and point == _MINUS_I):
            raise ZeroDivisionError(f"{point} is a pole")
        den = (point - _PLUS_I) ** self.a * (point - _MINUS_I) ** self.b
        return poly_eval(self.numerator, point).scale(GaussianRational(1) / den)

    def __eq__(self, other):
        if not isinstance(other, PoleRational):
            if isinstance(other, (int, GaussianRational, ScalarPoly, CliffordElement)):
                other = PoleRational.const(other)
            else:
                return NotImplemented
        return (self.numerator, self.a, self.b) == (other.numerator, other.a, other.b)

    def __hash__(self):
        return hash((self.numerator, self.a, self.b))

    def __repr__(self):
        return f"PoleRational({self})"

    def __str__(self):
        return render_rational(self)


# -- text rendering --

def _content_denominator(p: PoleRational) -> int:
    den = 1
    for c in p.numerator:
        for poly in c.coeffs.values():
            for g in poly.terms.values():
                den = lcm(den, g.re.denominator, g.im.denominator)
    return den


def render_numerator(num: Poly) -> tuple[str, int]:
    parts = []
    for k, c in enumerate(num):
        for g, exp, mono in c.flat_terms():
            tail = monomial_factors(exp)
            if k == 1:
                tail.append("xi")
            elif k > 1:
                tail.append(f"xi^{k}")
            if mono != "1":
                tail.append({"AB": "A*B", "PA": "P*A", "PB": "P*B", "PAB": "P*A*B"}.get(mono, mono))
            parts.append(render_term(g, [], tail))
    if not parts:
        return "0", 0
    return join_signed(parts), len(parts)


def render_rational(p: PoleRational) -> str:
    if p.is_zero():
        return "0"
    den_factors = []
    content = 1
    if p.a or p.b:
        content = _content_denominator(p)
    num_text, nterms = render_numerator(poly_scale(p.numerator, content) if content != 1 else p.numerator)
    if content != 1:
        den_factors.append(str(content))
    for sign, k in (("-", p.a), ("+", p.b)):
        if k == 1:
            den_factors.append(f"(xi{sign}i)")
        elif k > 1:
            den_factors.append(f"(xi{sign}i)^{k}")
    if not den_factors:
        if nterms == 1 and p.degree == 0 and p.numerator[0].is_scalar() and p.numerator[0].coeff("1").is_constant():
            return str(p.numerator[0].coeff("1").constant_value())
        return num_text
    if nterms > 1:
        num_text = f"({num_text})"
    den = den_factors[0] if len(den_factors) == 1 else "(" + "*".join(den_factors) + ")"
    return f"{num_text}/{den}"


# -- calculus --

def rat_arith(op: str, x: PoleRational, y: PoleRational | None = None) -> PoleRational:
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    raise ValueError(f"unknown rational operation {op!r}")


def rat_diff_xi(x: PoleRational, k: int = 1) -> PoleRational:
    """k-th derivative in xi_n."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    for _ in range(k):
        if x.is_zero():
            return x
        num, a, b = x.numerator, x.a, x.b
        # d/dxi N/((xi-i)^a (xi+i)^b)
        #   = [N'(xi-i)(xi+i) - a N (xi+i) - b N (xi-i)] / ((xi-i)^(a+1) (xi+i)^(b+1))
        t1 = scalar_poly_mul(poly_deriv(num), [GaussianRational(1), GaussianRational(0), GaussianRational(1)])
        t2 = scalar_poly_mul(num, [GaussianRational(-a) * _PLUS_I, GaussianRational(-a)])
        t3 = scalar_poly_mul(num, [GaussianRational(b) * _PLUS_I, GaussianRational(-b)])
        x = PoleRational(poly_add(poly_add(t1, t2), t3), a + 1, b + 1)
    return x


@dataclass(frozen=True)
class PartialFractions:
    polynomial: Poly
    plus: dict = field(default_factory=dict)  # order -> coefficient of 1/(xi-i)^order
    minus: dict = field(default_factory=dict)  # order -> coefficient of 1/(xi+i)^order

    def principal_part(self, side: str) -> PoleRational:
        parts = self.plus if side == "plus" else self.minus
        root = _PLUS_I if side == "plus" else _MINUS_I
        if not parts:
            return PoleRational()
        top = max(parts)
        num: Poly = ()
        for m, c in parts.items():
            num = poly_add(num, scalar_poly_mul((c,), linear_power(root, top - m)))
        return PoleRational(num, top, 0) if side == "plus" else PoleRational(num, 0, top)

    def recombine(self) -> PoleRational:
        return PoleRational(self.polynomial) + self.principal_part("plus") + self.principal_part("minus")

    def entries(self) -> list:
        out = [("+i", m, c) for m, c in sorted(self.plus.items(), reverse=True)]
        out += [("-i", m, c) for m, c in sorted(self.minus.items(), reverse=True)]
        return out


def _taylor_at(num: Poly, root: GaussianRational, other: GaussianRational, other_order: int, terms: int) -> list:
    """First `terms` Taylor coefficients in t of num(root + t) / (root - other + t)^other_order."""
    shifted = []
    for j in range(min(terms, len(num))):
        acc = _ZERO
        for k in range(j, len(num)):
            acc = acc + num[k].scale(comb(k, j) * root ** (k - j))
        shifted.append(acc)
    gap = root - other
    if other_order == 0:
        inv = [GaussianRational(1)] + [GaussianRational(0)] * (terms - 1)
    else:
        inv = []
    for m in range(terms if other_order else 0):
        # binomial series of (1 + t/gap)^(-other_order)
        inv.append(GaussianRational((-1) ** m * comb(other_order + m - 1, m)) / gap ** (other_order + m))
    out = []
    for j in range(terms):
        acc = _ZERO
        for s in range(min(j + 1, len(shifted))):
            acc = acc + shifted[s].scale(inv[j - s])
        out.append(acc)
    return out


def rat_partial_fractions(x: PoleRational) -> PartialFractions:
    num, a, b = x.numerator, x.a, x.b
    den = scalar_poly_mul(
        (CliffordElement.scalar(1),),
        _poly_product(linear_power(_PLUS_I, a), linear_power(_MINUS_I, b)),
    )
    quotient = _poly_divmod_monic(num, [c.coeff("1").constant_value() for c in den])
    plus = {}
    if a:
        coeffs = _taylor_at(num, _PLUS_I, _MINUS_I, b, a)
        plus = {a - j: c for j, c in enumerate(coeffs) if not c.is_zero()}
    minus = {}
    if b:
        coeffs = _taylor_at(num, _MINUS_I, _PLUS_I, a, b)
        minus = {b - j: c for j, c in enumerate(coeffs) if not c.is_zero()}
    return PartialFractions(quotient, plus, minus)


def _poly_product(p: list, q: list) -> list:
    out = [GaussianRational(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _poly_divmod_monic(num: Poly, den: list) -> Poly:
    """Quotient of num by a monic scalar polynomial."""
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return ()
    rem = list(num)
    q = [_ZERO] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = rem[k]
        if c.is_zero():
            continue
        q[k - dd] = c
        for j in range(dd + 1):
            rem[k - dd + j] = rem[k - dd + j] - c.scale(den[j])
    return _strip(q)


def pi_half(x: PoleRational, side: str) -> PoleRational:
    """pi^+ keeps the principal part at +i, pi^- the one at -i."""
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    if not x.is_proper():
        raise ImproperRational(f"{x} has a polynomial part; pi^{'+' if side == 'plus' else '-'} is undefined here")
    return rat_partial_fractions(x).principal_part(side)


def pi_plus(x: PoleRational) -> PoleRational:
    return pi_half(x, "plus")


def pi_minus(x: PoleRational) -> PoleRational:
    return pi_half(x, "minus")


@dataclass(frozen=True)
class LineIntegral:
    """Value of an integral over the real line: coefficient * pi^pi_power."""

    coefficient: CliffordElement
    pi_power: int = 1

    def scalar(self) -> ScalarPoly:
        if not self.coefficient.is_scalar():
            raise ValueError("integral has non-scalar Clifford part")
        return self.coefficient.coeff("1")

    def __str__(self):
        from .scalars import Marked

        if self.coefficient.is_scalar():
            return str(Marked(self.scalar(), self.pi_power))
        return f"({self.coefficient})*pi"


def residue_plus(x: PoleRational) -> CliffordElement:
    """Residue at +i by the derivative formula 1/(a-1)! [(xi-i)^a x]^(a-1) at xi = i."""
    if x.a == 0:
        return _ZERO
    g = PoleRational(x.numerator, 0, x.b)
    g = rat_diff_xi(g, x.a - 1)
    return g.evaluate_at(_PLUS_I).scale(GaussianRational(Fraction(1, factorial(x.a - 1))))


def integrate_line(x: PoleRational) -> LineIntegral:
    """Integral over the real line, closing the contour in the upper half plane."""
    if not x.is_zero() and x.degree > x.a + x.b - 2:
        raise NotIntegrable(
            f"numerator degree {x.degree} exceeds {x.a + x.b - 2}; integrand is not absolutely integrable"
        )
    res = residue_plus(x)
    # 2*pi*i*Res = (2i*Res) * pi
    return LineIntegral(res.scale(GaussianRational(0, 2)), 1)
